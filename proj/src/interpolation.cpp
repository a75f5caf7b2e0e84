#include "ncmodel/interpolation.hpp"

#include "ncmodel/error.hpp"

#include <cmath>

namespace ncmodel {

namespace {

double point_norm(const Point& p) {
  double s = 0.0;
  for (cplx z : p) s += std::norm(z);
  return std::sqrt(s);
}

void check_ball(const Point& p) {
  if (point_norm(p) >= 1.0) throw Error(ErrorKind::out_of_ball, "point must satisfy |lambda| < 1");
}

cplx inner(const Point& a, const Point& b) {
  cplx s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) s += a[t] * std::conj(b[t]);
  return s;
}

}  // namespace

MembershipResult variety_membership(const Point& lambda, const std::vector<NcPolynomial>& generators,
                                    double tol) {
  check_ball(lambda);
  MembershipResult out;
  out.member = true;
  for (const auto& p : generators) {
    if (p.max_letter() > static_cast<int>(lambda.size()))
      throw Error(ErrorKind::invalid_parameter, "generator uses a letter beyond the point dimension");
    double r = std::abs(evaluate_polynomial(p, lambda));
    out.residuals.push_back(r);
    if (r > tol) out.member = false;
  }
  return out;
}

KernelVector kernel_vector(const ConstrainedSubspace& cs, const ConstrainedShifts& shifts,
                           const Point& lambda, double tol) {
  if (static_cast<int>(lambda.size()) != cs.n())
    throw Error(ErrorKind::invalid_parameter, "point dimension differs from n");
  if (!variety_membership(lambda, cs.generators(), tol).member)
    throw Error(ErrorKind::precondition, "point is not in the zero set of the ideal");
  const TruncatedFock& fock = cs.fock();
  Vec z(fock.dim());
  z(0) = 1.0;
  for (Index a = 1; a < fock.dim(); ++a) {
    // parent of g_i alpha is alpha; lambda_alpha is commutative so the split point is irrelevant
    int i = fock.first_letter(a);
    z(a) = z(fock.drop_first(a)) * std::conj(lambda[i - 1]);
  }
  const double zn = z.norm();
  KernelVector out;
  out.coords = cs.basis().adjoint() * z;
  out.projection_residual = (z - cs.basis() * out.coords).norm() / zn;
  for (int i = 0; i < cs.n(); ++i) {
    Vec r = shifts.B[i].adjoint() * out.coords - std::conj(lambda[i]) * out.coords;
    out.eigen_residual = std::max(out.eigen_residual, r.norm() / zn);
  }
  out.tail_bound = std::pow(point_norm(lambda), cs.degree());
  out.within_bound = out.eigen_residual <= out.tail_bound + out.projection_residual + 1e-12;
  return out;
}

Mat pick_matrix(const PickProblem& problem) {
  const std::size_t k = problem.points.size();
  if (k == 0) throw Error(ErrorKind::invalid_parameter, "pick problem needs at least one point");
  if (problem.targets.size() != k)
    throw Error(ErrorKind::invalid_parameter, "number of targets differs from number of points");
  const Index d = problem.targets[0].rows();
  for (const auto& a : problem.targets)
    if (a.rows() != d || a.cols() != d)
      throw Error(ErrorKind::invalid_parameter, "targets must be square of a common size");
  for (const auto& p : problem.points) {
    if (static_cast<int>(p.size()) != problem.n)
      throw Error(ErrorKind::invalid_parameter, "point dimension differs from n");
    check_ball(p);
    if (!problem.generators.empty() && !variety_membership(p, problem.generators).member)
      throw Error(ErrorKind::precondition, "point is not in the zero set of the ideal");
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      Point diff(problem.n);
      for (int t = 0; t < problem.n; ++t) diff[t] = problem.points[i][t] - problem.points[j][t];
      if (point_norm(diff) <= 1e-14) throw Error(ErrorKind::degenerate_input, "coincident interpolation points");
    }

  Mat m(static_cast<Index>(k) * d, static_cast<Index>(k) * d);
  const Mat eye = identity(d);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      cplx den = 1.0 - inner(problem.points[i], problem.points[j]);
      Mat blk = (eye - problem.targets[i] * problem.targets[j].adjoint()) / den;
      if (i == j) blk = (0.5 * (blk + blk.adjoint())).eval();
      m.block(i * d, j * d, d, d) = blk;
      if (i != j) m.block(j * d, i * d, d, d) = blk.adjoint();
    }
  return m;
}

PickResult pick_feasible(const PickProblem& problem) { return pick_feasible(problem, problem.tol); }

PickResult pick_feasible(const PickProblem& problem, double tol) {
  PickResult out;
  out.matrix = pick_matrix(problem);
  Eigen::SelfAdjointEigenSolver<Mat> es(out.matrix);
  const auto& ev = es.eigenvalues();
  out.lambda_min = ev(0);
  out.lambda_max = ev(ev.size() - 1);
  out.band = tol * std::max(1.0, out.lambda_max);
  out.feasible = out.lambda_min >= -out.band;
  out.marginal = out.feasible && out.lambda_min <= out.band;
  if (!out.feasible) out.certificate = es.eigenvectors().col(0);
  return out;
}

}  // namespace ncmodel
