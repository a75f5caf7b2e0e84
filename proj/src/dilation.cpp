#include "ncmodel/dilation.hpp"

#include "ncmodel/charfn.hpp"
#include "ncmodel/error.hpp"

#include <cmath>

namespace ncmodel {

namespace {

Mat block_diag(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Mat krylov(const Tuple& V, Mat start, int steps) {
  Mat span = range_basis(start, 1.0);
  for (int s = 0; s < steps && span.cols() > 0; ++s) {
    Mat grown(span.rows(), span.cols() * (1 + static_cast<Index>(V.size())));
    grown.leftCols(span.cols()) = span;
    for (std::size_t i = 0; i < V.size(); ++i)
      grown.middleCols(span.cols() * (1 + static_cast<Index>(i)), span.cols()) = V[i] * span;
    Mat next = range_basis(grown, 1.0);
    bool stable = next.cols() == span.cols();
    span = std::move(next);
    if (stable) break;
  }
  return span;
}

}  // namespace

DilationBlocks build_dilation(const RowContraction& rc, ConstrainedSubspacePtr cs) {
  if (!cs) throw Error(ErrorKind::invalid_parameter, "missing constrained subspace");
  if (!satisfies_constraints(rc.ops(), cs->generators()))
    throw Error(ErrorKind::precondition, "row contraction violates the ideal generators");
  DilationBlocks out;
  out.rc = rc;
  out.cs = cs;
  out.kernel = constrained_poisson_kernel(rc, cs);
  out.shifts = out.kernel.shifts;
  out.Q = out.kernel.purity->Q;
  out.dilation_index = rc.defect_rank();

  // Lambda_i (Y h) = Y T_i^* h on range(Y); Y^+ inverts Y there.
  out.K_basis = psd_range_basis(out.Q, 1.0);
  const Index k = out.K_basis.cols();
  Eigen::VectorXd lam = (out.K_basis.adjoint() * out.Q * out.K_basis).diagonal().real();
  Eigen::VectorXd s = lam.cwiseSqrt();
  out.Y = s.cast<cplx>().asDiagonal() * out.K_basis.adjoint();
  Mat yplus = out.K_basis * s.cwiseInverse().cast<cplx>().asDiagonal();
  for (int i = 1; i <= rc.n(); ++i) out.Z.push_back((out.Y * rc.op(i).adjoint() * yplus).adjoint());

  const Index d = out.kernel.defect_dim();
  out.V.resize(out.kernel.matrix.rows() + k, rc.dim());
  out.V << out.kernel.matrix, out.Y;
  for (int i = 0; i < rc.n(); ++i)
    out.V_ops.push_back(block_diag(kron(out.shifts.B[i], identity(d)), out.Z[i]));

  Mat qk = out.K_basis * lam.cast<cplx>().asDiagonal() * out.K_basis.adjoint();
  Mat tail = cp_apply(rc, identity(rc.dim()), cs->degree() + 1);
  out.isometry_defect = op_norm(out.V.adjoint() * out.V - identity(rc.dim()));
  out.isometry_budget = op_norm(tail - out.Q) + op_norm(out.Q - qk) + 1e-12;

  if (k > 0) {
    Mat zz = -identity(k);
    for (const auto& z : out.Z) zz += z * z.adjoint();
    out.cuntz_defect = op_norm(zz);
    out.generator_residuals = check_constraints(out.Z, cs->generators());
  } else {
    out.generator_residuals.assign(cs->generators().size(), 0.0);
  }
  return out;
}

DilationResidual verify_dilation(const DilationBlocks& b) {
  DilationResidual out;
  const Index d = b.kernel.defect_dim();
  const Index top = b.kernel.matrix.rows();
  const auto& fock = b.cs->fock();
  const int window = std::min(b.cs->degree() - 1, b.cs->safe_degree() - 1);
  const Index rows = window < 0 ? 0 : fock.slice_offset(window + 1) * d;
  for (int i = 1; i <= b.rc.n(); ++i) {
    Mat diff = b.V * b.rc.op(i).adjoint() - b.V_ops[i - 1].adjoint() * b.V;
    out.residual = std::max(out.residual, op_norm(diff));
    Mat shift_part = b.cs->lift(diff.topRows(top), d);
    Mat win(rows + diff.rows() - top, diff.cols());
    win << shift_part.topRows(rows), diff.bottomRows(diff.rows() - top);
    out.window_residual = std::max(out.window_residual, op_norm(win));
  }
  double tail = op_norm(cp_apply(b.rc, identity(b.rc.dim()), b.cs->degree() + 1));
  out.budget = std::sqrt(tail) + 1e-10;
  out.pass = out.residual <= out.budget;
  return out;
}

Index dilation_index(const RowContraction& rc) { return rc.defect_rank(); }

WoldSplit wold_decompose(const Tuple& V, int k_max) {
  check_square_tuple(V, "wold_decompose");
  WoldSplit out;
  out.V = V;
  const Index dim = V[0].rows();
  out.Q = identity(dim);
  for (const auto& v : V) out.Q -= v * v.adjoint();
  out.idempotency_defect = op_norm(out.Q * out.Q - out.Q);
  Mat qrange = psd_range_basis(out.Q, 1.0);
  out.multiplicity = qrange.cols();

  out.K0_basis = krylov(V, qrange, k_max < 0 ? static_cast<int>(dim) : k_max);
  PurityResult p = purity(V, 1e-12);
  out.converged = p.converged;
  out.K0_kernel_basis = complement_basis(psd_range_basis(p.Q, 1.0), dim);
  out.K1_basis = complement_basis(out.K0_basis, dim);
  out.discrepancy = max_principal_angle(out.K0_basis, out.K0_kernel_basis);
  return out;
}

ShiftMultiplicity shift_multiplicity(const Tuple& V) {
  check_square_tuple(V, "shift_multiplicity");
  ShiftMultiplicity out;
  Mat q = identity(V[0].rows());
  for (const auto& v : V) q -= v * v.adjoint();
  out.mult = psd_rank(q, 1.0);
  out.is_shift = purity(V, 1e-12).is_pure;
  return out;
}

ModelSpace model_space(const RowContraction& rc, ConstrainedSubspacePtr cs) {
  if (!cs) throw Error(ErrorKind::invalid_parameter, "missing constrained subspace");
  PoissonKernel kj = constrained_poisson_kernel(rc, cs);
  if (!kj.purity->is_pure) throw Error(ErrorKind::precondition, "model space needs a pure row contraction");
  ModelSpace out;
  Mat theta = symbol_at(rc, kj.shifts.W);
  Mat tt = theta * theta.adjoint();
  // Theta is a partial isometry up to the truncation tail, so its range is
  // the spectral subspace of Theta Theta^* near 1.
  HermitianEigen e = hermitian_eigen(tt);
  Index keep = 0;
  while (keep < e.values.size() && e.values(keep) >= 0.5) ++keep;
  out.basis = e.vectors.rightCols(e.values.size() - keep);
  normalize_phases(out.basis);

  const Index d = kj.defect_dim();
  const Mat& K = kj.matrix;
  Mat ph = out.basis * out.basis.adjoint();
  out.complement_residual = op_norm(ph + tt - identity(tt.rows()));
  out.projection_residual = op_norm(ph - K * K.adjoint());
  out.budget = op_norm(cp_apply(rc, identity(rc.dim()), cs->degree() + 1)) + 1e-10;

  out.U = out.basis.adjoint() * K;
  out.unitarity_residual = op_norm(out.U.adjoint() * out.U - identity(rc.dim()));
  for (int i = 1; i <= rc.n(); ++i) {
    Mat c = out.basis.adjoint() * kron(kj.shifts.B[i - 1], identity(d)) * out.basis;
    out.equivalence_residual =
        std::max(out.equivalence_residual, op_norm(c * out.U - out.U * rc.op(i)));
    out.compressed.push_back(std::move(c));
  }
  return out;
}

MaximalPiece maximal_constrained_piece(const Tuple& V, const std::vector<NcPolynomial>& polys,
                                       int k_max) {
  check_square_tuple(V, "maximal_constrained_piece");
  if (polys.empty()) throw Error(ErrorKind::invalid_parameter, "maximal_constrained_piece needs polynomials");
  const Index dim = V[0].rows();
  Mat start(dim, dim * static_cast<Index>(polys.size()));
  for (std::size_t k = 0; k < polys.size(); ++k) {
    if (polys[k].is_zero())
      throw Error(ErrorKind::invalid_parameter, "the zero polynomial is not a valid generator");
    start.middleCols(dim * static_cast<Index>(k), dim) = evaluate_polynomial(polys[k], V);
  }
  MaximalPiece out;
  out.span_basis = krylov(V, start, k_max < 0 ? static_cast<int>(dim) : k_max);
  out.basis = complement_basis(out.span_basis, dim);
  return out;
}

double maximal_piece_residual(const ConstrainedSubspace& cs) {
  const auto& fock = cs.fock();
  Tuple S;
  for (int i = 1; i <= cs.n(); ++i) S.push_back(creation_matrix(fock, Side::left, i));
  MaximalPiece mp = maximal_constrained_piece(S, cs.generators(), cs.degree());
  Mat diff = mp.basis * mp.basis.adjoint() - cs.projection();
  const Index rows = cs.safe_degree() >= cs.degree() ? fock.dim() : fock.slice_offset(cs.safe_degree() + 1);
  return op_norm(diff.topLeftCorner(rows, rows));
}

}  // namespace ncmodel
