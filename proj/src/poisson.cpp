#include "ncmodel/poisson.hpp"

#include "ncmodel/error.hpp"

#include <cmath>

namespace ncmodel {

namespace {

constexpr double kPurityTol = 1e-12;

RowContraction scale_tuple(const RowContraction& rc, double r) {
  if (r == 1.0) return rc;
  Tuple t = rc.ops();
  for (auto& m : t) m *= r;
  return RowContraction::validate(std::move(t));
}

Index window_rows(const TruncatedFock& fock, int max_degree, Index block) {
  if (max_degree >= fock.degree()) return fock.dim() * block;
  return fock.slice_offset(max_degree + 1) * block;
}

}  // namespace

Mat kernel_matrix(const RowContraction& rc, const TruncatedFock& fock) {
  if (fock.n() != rc.n())
    throw Error(ErrorKind::invalid_parameter, "Fock space and row contraction disagree on n");
  const Index d = rc.defect_rank();
  const Index h = rc.dim();
  Mat K(fock.dim() * d, h);
  if (d == 0) return K;
  K.topRows(d) = rc.delta_coords();
  for (Index idx = 1; idx < fock.dim(); ++idx) {
    Index parent = fock.drop_first(idx);
    int i = fock.first_letter(idx);
    K.middleRows(idx * d, d) = K.middleRows(parent * d, d) * rc.op(i).adjoint();
  }
  return K;
}

PoissonKernel poisson_kernel(const RowContraction& rc, double r, const TruncatedFock& fock) {
  if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorKind::invalid_parameter, "radius must lie in (0, 1]");
  PoissonKernel out;
  out.scaled = scale_tuple(rc, r);
  out.r = r;
  out.N = fock.degree();
  out.fock = fock;
  out.matrix = kernel_matrix(out.scaled, fock);
  out.defect_basis = out.scaled.defect_basis();
  out.tail_budget = op_norm(cp_apply(out.scaled, identity(rc.dim()), out.N + 1));
  Mat target = identity(rc.dim());
  if (r == 1.0) {
    out.purity = purity(rc, kPurityTol);
    target -= out.purity->Q;
  }
  out.isometry_defect = op_norm(out.matrix.adjoint() * out.matrix - target);
  return out;
}

PoissonKernel constrained_poisson_kernel(const RowContraction& rc, ConstrainedSubspacePtr cs) {
  if (!cs) throw Error(ErrorKind::invalid_parameter, "missing constrained subspace");
  if (!satisfies_constraints(rc.ops(), cs->generators()))
    throw Error(ErrorKind::precondition, "row contraction violates the ideal generators");
  PoissonKernel out = poisson_kernel(rc, 1.0, cs->fock());
  const Index d = out.defect_dim();
  Mat full = std::move(out.matrix);
  out.matrix = cs->compress(full, d);
  out.range_residual = op_norm(full - cs->lift(out.matrix, d));
  out.range_budget = 1e-10;
  out.cs = cs;
  out.shifts = constrained_shifts(*cs);
  Mat target = identity(rc.dim()) - out.purity->Q;
  out.isometry_defect = op_norm(out.matrix.adjoint() * out.matrix - target);
  return out;
}

IntertwiningResult intertwining_check(const PoissonKernel& kernel) {
  IntertwiningResult out;
  const Index d = kernel.defect_dim();
  for (int i = 1; i <= kernel.scaled.n(); ++i) {
    Mat lhs = kernel.matrix * kernel.scaled.op(i).adjoint();
    Mat diff;
    int window = kernel.N - 1;
    if (kernel.constrained()) {
      Mat rhs = kron(kernel.shifts.B[i - 1].adjoint(), identity(d)) * kernel.matrix;
      diff = kernel.cs->lift(lhs - rhs, d);
      window = std::min(window, kernel.cs->safe_degree() - 1);
    } else {
      diff = lhs - apply_creation_adjoint(kernel.fock, Side::left, i, kernel.matrix, d);
    }
    double w = op_norm(diff.topRows(window_rows(kernel.fock, window, d)));
    out.per_generator.push_back(w);
    out.residual = std::max(out.residual, w);
    out.full_residual = std::max(out.full_residual, op_norm(diff));
  }
  return out;
}

Mat poisson_transform_truncated(const PoissonKernel& kernel, const Word& alpha, const Word& beta) {
  const Index d = kernel.defect_dim();
  Mat k = kernel.constrained() ? kernel.cs->lift(kernel.matrix, d) : kernel.matrix;
  Mat moved = apply_left_word(kernel.fock, alpha, apply_left_word_adjoint(kernel.fock, beta, k, d), d);
  return k.adjoint() * moved;
}

static Mat word_product(const RowContraction& rc, const Word& w) {
  Mat out = identity(rc.dim());
  for (int l : w.letters()) {
    if (l > rc.n()) throw Error(ErrorKind::invalid_parameter, "word letter exceeds n");
    out = out * rc.op(l);
  }
  return out;
}

PoissonTransformResult poisson_transform(const RowContraction& rc, const Word& alpha,
                                         const Word& beta, std::vector<double> r_values) {
  PoissonTransformResult out;
  Mat ta = word_product(rc, alpha);
  Mat tb = word_product(rc, beta);
  out.target = ta * tb.adjoint();
  const Mat eye = identity(rc.dim());
  for (double r : r_values) {
    if (!(r > 0.0 && r < 1.0))
      throw Error(ErrorKind::invalid_parameter, "poisson_transform radii must lie in (0, 1)");
    RowContraction s = scale_tuple(rc, r);
    Mat d2 = s.delta() * s.delta();
    Mat term = d2;
    Mat tail = cp_map(s.ops(), eye);
    Mat sum = Mat::Zero(rc.dim(), rc.dim());
    for (int k = 0; k < 4000000; ++k) {
      sum += term;
      if (op_norm(tail) < 1e-15) break;
      term = cp_map(s.ops(), term);
      tail = cp_map(s.ops(), tail);
    }
    double w = std::pow(r, alpha.length() + beta.length());
    Mat v = w * ta * sum * tb.adjoint();
    out.r_values.push_back(r);
    out.deviations.push_back(op_norm(v - out.target));
    out.values.push_back(std::move(v));
  }
  if (!out.values.empty()) {
    out.limit_estimate = out.values.back();
    out.richardson = out.limit_estimate;
    if (out.values.size() >= 2) {
      std::size_t m = out.values.size();
      double h1 = 1.0 - out.r_values[m - 2], h2 = 1.0 - out.r_values[m - 1];
      out.richardson = out.values[m - 1] + (out.values[m - 1] - out.values[m - 2]) * (h2 / (h1 - h2));
    }
    out.deviation = op_norm(out.limit_estimate - out.target);
  }
  return out;
}

GramResult kernel_gram(const RowContraction& rc, const TruncatedFock& fock) {
  GramResult out;
  Mat k = kernel_matrix(rc, fock);
  out.gram = k.adjoint() * k;
  out.purity = purity(rc, kPurityTol);
  out.defect = op_norm(out.gram - (identity(rc.dim()) - out.purity.Q));
  out.budget = op_norm(cp_apply(rc, identity(rc.dim()), fock.degree() + 1));
  out.within_budget = out.defect <= out.budget + 1e-10;
  return out;
}

}  // namespace ncmodel
