#include "ncmodel/charfn.hpp"

#include "ncmodel/error.hpp"
#include "ncmodel/poisson.hpp"

#include <cmath>
#include <functional>

namespace ncmodel {

const Mat& MultiAnalyticOperator::coefficient(const Word& w) const {
  Index idx = words.index_of(w);
  if (idx < 0) throw Error(ErrorKind::invalid_parameter, "word longer than the stored coefficients");
  return coeffs[idx];
}

MultiAnalyticOperator characteristic_coefficients(const RowContraction& rc, int max_degree) {
  if (max_degree < 1) throw Error(ErrorKind::invalid_parameter, "max_degree must be >= 1");
  MultiAnalyticOperator op;
  op.n = rc.n();
  op.max_degree = max_degree;
  op.words = TruncatedFock(rc.n(), max_degree);
  op.target_dim = rc.defect_rank();
  op.source_dim = rc.defect_star_rank();
  op.coeffs.resize(op.words.dim());
  op.coeffs[0] = rc.minus_t_coords();

  // (I - sum R_i (x) T_i^*)^{-1} = sum_gamma R_gamma (x) T_{reverse(gamma)}^*, so
  // theta_(gamma g_i) = Delta_T T_{reverse(gamma)}^* P_i Delta_{T*}.
  const Index h = rc.dim();
  const Mat c = rc.delta_star_coords();
  const TruncatedFock& f = op.words;
  std::vector<Mat> left(f.slice_offset(max_degree));
  left[0] = rc.delta_coords();
  for (Index g = 1; g < static_cast<Index>(left.size()); ++g)
    left[g] = left[f.drop_last(g)] * rc.op(f.last_letter(g)).adjoint();
  for (Index g = 0; g < static_cast<Index>(left.size()); ++g)
    for (int i = 1; i <= rc.n(); ++i)
      op.coeffs[f.right_child(g, i)] = left[g] * c.middleRows((i - 1) * h, h);
  return op;
}

MultiAnalyticOperator constrained_characteristic(const RowContraction& rc, ConstrainedSubspacePtr cs,
                                                 int max_degree) {
  if (!cs) throw Error(ErrorKind::invalid_parameter, "missing constrained subspace");
  if (!satisfies_constraints(rc.ops(), cs->generators()))
    throw Error(ErrorKind::precondition, "row contraction violates the ideal generators");
  MultiAnalyticOperator op = characteristic_coefficients(rc, max_degree);
  op.flavor = Flavor::constrained;
  op.cs = std::move(cs);
  return op;
}

MultiAnalyticOperator constant_symbol(int n, int max_degree, const Mat& c) {
  MultiAnalyticOperator op;
  op.n = n;
  op.max_degree = max_degree;
  op.words = TruncatedFock(n, max_degree);
  op.target_dim = c.rows();
  op.source_dim = c.cols();
  op.coeffs.assign(op.words.dim(), Mat::Zero(c.rows(), c.cols()));
  op.coeffs[0] = c;
  return op;
}

static Mat weighted_assembly(const MultiAnalyticOperator& op, const TruncatedFock& fock,
                             Index multiplicity, double r) {
  if (op.n != fock.n()) throw Error(ErrorKind::invalid_parameter, "symbol and Fock space disagree on n");
  if (op.max_degree < fock.degree())
    throw Error(ErrorKind::invalid_parameter, "coefficients do not reach the truncation degree");
  const Index dt = op.target_dim * multiplicity;
  const Index ds = op.source_dim * multiplicity;
  const Mat im = identity(multiplicity);
  Mat out = Mat::Zero(fock.dim() * dt, fock.dim() * ds);
  std::vector<Mat> blocks(fock.dim());
  for (Index a = 0; a < fock.dim(); ++a) {
    double w = r == 1.0 ? 1.0 : std::pow(r, fock.length(a));
    blocks[a] = multiplicity == 1 ? Mat(w * op.coeffs[a]) : kron(w * op.coeffs[a], im);
  }
  // R_alpha e_beta = e_{beta reverse(alpha)}
  for (Index b = 0; b < fock.dim(); ++b) {
    const int room = fock.degree() - fock.length(b);
    for (Index a = 0; a < fock.slice_offset(room + 1); ++a) {
      Index row = fock.concat(b, fock.reversed(a));
      out.block(row * dt, b * ds, dt, ds) = blocks[a];
    }
  }
  return out;
}

Mat assemble(const MultiAnalyticOperator& op, const TruncatedFock& fock, Index multiplicity) {
  return weighted_assembly(op, fock, multiplicity, 1.0);
}

Mat assemble_radial(const MultiAnalyticOperator& op, const TruncatedFock& fock, double r) {
  return weighted_assembly(op, fock, 1, r);
}

Mat assemble(const MultiAnalyticOperator& op, const ConstrainedSubspace& cs,
             const ConstrainedShifts& shifts, Index multiplicity) {
  if (op.max_degree < cs.degree())
    throw Error(ErrorKind::invalid_parameter, "coefficients do not reach the truncation degree");
  const Index dt = op.target_dim * multiplicity;
  const Mat ij = identity(cs.dim());
  const Mat im = identity(multiplicity);
  std::vector<Mat> lifted;
  for (const auto& w : shifts.W) lifted.push_back(kron(w, identity(dt)));
  const TruncatedFock& f = op.words;
  // F(p) = I (x) theta_p + sum_i (W_i (x) I) F(p g_i)
  std::function<Mat(Index)> horner = [&](Index p) -> Mat {
    Mat theta = multiplicity == 1 ? op.coeffs[p] : kron(op.coeffs[p], im);
    Mat acc = kron(ij, theta);
    if (f.length(p) < cs.degree())
      for (int i = 1; i <= op.n; ++i) acc += lifted[i - 1] * horner(f.right_child(p, i));
    return acc;
  };
  return horner(0);
}

double analyticity_residual(const Mat& assembled, const TruncatedFock& fock, Index source_dim,
                            Index target_dim) {
  double worst = 0.0;
  const Index cols = fock.slice_offset(fock.degree()) * source_dim;
  for (int i = 1; i <= fock.n(); ++i) {
    // M (S_i (x) I) = ((S_i^* (x) I) M^*)^*
    Mat right =
        apply_creation_adjoint(fock, Side::left, i, Mat(assembled.adjoint()), source_dim).adjoint();
    Mat left = apply_creation(fock, Side::left, i, assembled, target_dim);
    worst = std::max(worst, op_norm((right - left).leftCols(cols)));
  }
  return worst;
}

double analyticity_residual(const Mat& assembled, const ConstrainedSubspace& cs,
                            const ConstrainedShifts& shifts, Index source_dim, Index target_dim) {
  double worst = 0.0;
  Mat win = kron(cs.window(std::min(cs.degree() - 1, cs.safe_degree() - 1)), identity(source_dim));
  for (const auto& b : shifts.B) {
    Mat diff = assembled * kron(b, identity(source_dim)) - kron(b, identity(target_dim)) * assembled;
    worst = std::max(worst, op_norm(diff * win));
  }
  return worst;
}

Mat symbol_at(const RowContraction& rc, const Tuple& x) {
  check_square_tuple(x, "symbol_at");
  if (static_cast<int>(x.size()) != rc.n())
    throw Error(ErrorKind::invalid_parameter, "point has the wrong number of entries");
  const Index k = x[0].rows();
  const Index h = rc.dim();
  const Mat ik = identity(k);
  Mat a = identity(k * h);
  Mat xhat = Mat::Zero(k * h, k * h * rc.n());
  for (int i = 0; i < rc.n(); ++i) {
    a -= kron(x[i], rc.ops()[i].adjoint());
    Mat sel = Mat::Zero(h, h * rc.n());
    sel.middleCols(i * h, h) = identity(h);
    xhat += kron(x[i], sel);
  }
  Mat rhs = xhat * kron(ik, rc.delta_star_coords());
  Mat mid = a.partialPivLu().solve(rhs);
  return kron(ik, rc.minus_t_coords()) + kron(ik, rc.delta_coords()) * mid;
}

Mat point_evaluate(const RowContraction& rc, const Tuple& x) {
  check_square_tuple(x, "point_evaluate");
  double rho = spectral_radius(x);
  if (!(rho < 1.0))
    throw Error(ErrorKind::precondition, "point has spectral radius >= 1");
  return symbol_at(rc, x);
}

Mat partial_sum(const MultiAnalyticOperator& op, const Tuple& x) {
  check_square_tuple(x, "partial_sum");
  const Index k = x[0].rows();
  const TruncatedFock& f = op.words;
  std::vector<Mat> xa(f.dim());
  xa[0] = identity(k);
  Mat out = kron(xa[0], op.coeffs[0]);
  for (Index a = 1; a < f.dim(); ++a) {
    xa[a] = xa[f.drop_last(a)] * x[f.last_letter(a) - 1];
    out += kron(xa[a], op.coeffs[a]);
  }
  return out;
}

static FactorizationReport point_report(const RowContraction& rc, const Tuple& x, double tol) {
  FactorizationReport out;
  out.mode = "point";
  out.spectral_radius = spectral_radius(x);
  if (!(out.spectral_radius < 1.0))
    throw Error(ErrorKind::precondition, "point has spectral radius >= 1");
  Mat theta = symbol_at(rc, x);
  const Index k = x[0].rows();
  const Index h = rc.dim();
  Mat a = identity(k * h);
  Mat xx = identity(k);
  for (int i = 0; i < rc.n(); ++i) {
    a -= kron(x[i], rc.ops()[i].adjoint());
    xx -= x[i] * x[i].adjoint();
  }
  Mat dl = kron(identity(k), rc.delta_coords());
  // y = Delta A^{-1}, from A^* y^* = Delta^*
  Mat ys = Mat(a.adjoint()).partialPivLu().solve(Mat(dl.adjoint()));
  Mat rhs = ys.adjoint() * kron(xx, identity(h)) * ys;
  Mat lhs = identity(theta.rows()) - theta * theta.adjoint();
  out.residual = op_norm(lhs - rhs);
  HermitianEigen e = hermitian_eigen(lhs);
  out.min_eigenvalue = e.values.size() ? e.values(e.values.size() - 1) : 0.0;
  out.budget = tol;
  out.pass = out.residual <= tol;
  return out;
}

FactorizationReport verify_point(const RowContraction& rc, const Tuple& x, double tol) {
  return point_report(rc, x, tol);
}

FactorizationReport verify_constrained_point(const RowContraction& rc,
                                             const std::vector<NcPolynomial>& gens, const Tuple& x,
                                             double tol) {
  if (!satisfies_constraints(rc.ops(), gens))
    throw Error(ErrorKind::precondition, "row contraction violates the ideal generators");
  if (!satisfies_constraints(x, gens))
    throw Error(ErrorKind::precondition, "point violates the ideal generators");
  FactorizationReport out = point_report(rc, x, tol);
  out.mode = "constrained_point";
  return out;
}

FactorizationReport verify_truncated(const RowContraction& rc, const TruncatedFock& fock) {
  FactorizationReport out;
  out.mode = "truncated";
  MultiAnalyticOperator op = characteristic_coefficients(rc, std::max(1, fock.degree()));
  Mat theta = assemble(op, fock);
  Mat k = kernel_matrix(rc, fock);
  Mat diff = identity(theta.rows()) - theta * theta.adjoint() - k * k.adjoint();
  out.residual = op_norm(diff);
  out.budget = op_norm(cp_apply(rc, identity(rc.dim()), fock.degree() + 1));
  out.pass = out.residual <= out.budget + 1e-10;
  return out;
}

FactorizationReport verify_constrained_truncated(const RowContraction& rc,
                                                 ConstrainedSubspacePtr cs) {
  FactorizationReport out;
  out.mode = "constrained_truncated";
  PoissonKernel kj = constrained_poisson_kernel(rc, cs);
  ConstrainedShifts shifts = constrained_shifts(*cs);
  Mat theta = symbol_at(rc, shifts.W);
  const Index d = rc.defect_rank();
  Mat diff = identity(theta.rows()) - theta * theta.adjoint() - kj.matrix * kj.matrix.adjoint();
  Mat win = kron(cs->window(cs->safe_degree()), identity(d));
  out.residual = op_norm(win.adjoint() * diff * win);
  out.budget = op_norm(cp_apply(rc, identity(rc.dim()), cs->degree() + 1));
  out.pass = out.residual <= out.budget + 1e-10;
  return out;
}

TwoPathReport constrained_two_path(const RowContraction& rc, ConstrainedSubspacePtr cs) {
  MultiAnalyticOperator op = constrained_characteristic(rc, cs, std::max(1, cs->degree()));
  ConstrainedShifts shifts = constrained_shifts(*cs);
  Mat full = assemble(op, cs->fock());
  Mat half = cs->compress(full, op.target_dim);
  Mat compressed = cs->compress(Mat(half.adjoint()), op.source_dim).adjoint();
  Mat win = kron(cs->window(cs->safe_degree()), identity(op.source_dim));
  TwoPathReport out;
  out.coefficient_path = op_norm((assemble(op, *cs, shifts) - compressed) * win);
  out.resolvent_path = op_norm((symbol_at(rc, shifts.W) - compressed) * win);
  return out;
}

double unitary_invariance_check(const RowContraction& rc, const Mat& U, int max_degree) {
  if (U.rows() != rc.dim() || U.cols() != rc.dim())
    throw Error(ErrorKind::invalid_parameter, "U must act on H");
  if (op_norm(U.adjoint() * U - identity(rc.dim())) > 1e-12)
    throw Error(ErrorKind::invalid_parameter, "U is not unitary");
  Tuple moved;
  for (const auto& t : rc.ops()) moved.push_back(U * t * U.adjoint());
  RowContraction rc2 = RowContraction::validate(std::move(moved));
  MultiAnalyticOperator a = characteristic_coefficients(rc, max_degree);
  MultiAnalyticOperator b = characteristic_coefficients(rc2, max_degree);
  Mat tau = rc2.defect_basis().adjoint() * U * rc.defect_basis();
  Mat tau_s = rc2.defect_star_basis().adjoint() * kron(identity(rc.n()), U) * rc.defect_star_basis();
  double worst = 0.0;
  for (std::size_t k = 0; k < a.coeffs.size(); ++k)
    worst = std::max(worst, op_norm(tau * a.coeffs[k] - b.coeffs[k] * tau_s));
  return worst;
}

}  // namespace ncmodel
