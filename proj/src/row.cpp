#include "ncmodel/row.hpp"

#include "ncmodel/error.hpp"

#include <cmath>

namespace ncmodel {

RowContraction RowContraction::validate(Tuple t) {
  check_square_tuple(t, "row contraction");
  RowContraction rc;
  rc.t_ = std::move(t);
  rc.row_ = row_operator(rc.t_);
  const Index d = rc.dim();
  Mat gram = rc.row_ * rc.row_.adjoint();
  rc.norm_ = op_norm(gram);
  if (rc.norm_ > 1.0 + kRowContractionTol) throw NotRowContraction(rc.norm_ - 1.0);

  // Rank decisions are taken on the squared defects against the unit scale:
  // square roots of rounding noise would otherwise look like real rank.
  Mat d2 = identity(d) - gram;
  Mat d2s = identity(d * rc.n()) - rc.row_.adjoint() * rc.row_;
  rc.delta_ = psd_sqrt(d2, kRowContractionTol);
  rc.delta_star_ = psd_sqrt(d2s, kRowContractionTol);
  rc.dt_basis_ = psd_range_basis(d2, 1.0);
  rc.dts_basis_ = psd_range_basis(d2s, 1.0);
  return rc;
}

Mat cp_map(const Tuple& t, const Mat& x) {
  Mat out = Mat::Zero(x.rows(), x.cols());
  for (const auto& ti : t) out += ti * x * ti.adjoint();
  return out;
}

Mat cp_apply(const Tuple& t, const Mat& x, int k) {
  if (k < 0) throw Error(ErrorKind::invalid_parameter, "cp_apply needs k >= 0");
  Mat out = x;
  for (int j = 0; j < k; ++j) out = cp_map(t, out);
  return out;
}

PurityResult purity(const Tuple& t, double tol, int k_max) {
  check_square_tuple(t, "purity");
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_parameter, "purity needs tol > 0");
  PurityResult out;
  Mat x = identity(t[0].rows());
  double prev = -1.0;
  for (int k = 1; k <= k_max; ++k) {
    Mat next = cp_map(t, x);
    next = 0.5 * (next + next.adjoint());
    double step = op_norm(next - x);
    x = std::move(next);
    out.k_used = k;
    out.last_step = step;
    if (step <= 1e-3 * tol) {
      out.converged = true;
      break;
    }
    if (prev > 0.0) {
      double rho = step / prev;
      if (rho < 1.0 && step * rho / (1.0 - rho) < tol) {
        out.converged = true;
        break;
      }
    }
    prev = step;
  }
  out.Q = x;
  out.is_pure = op_norm(x) < tol;
  return out;
}

double spectral_radius(const Tuple& t) {
  check_square_tuple(t, "spectral_radius");
  const Index d = t[0].rows();
  Mat eye = identity(d);
  Eigen::Map<const Vec> vec_eye(eye.data(), d * d);

  if (d * d <= 576) {
    // Column-major vec(T X T^*) = (conj(T) (x) T) vec(X).
    Mat m = Mat::Zero(d * d, d * d);
    for (const auto& ti : t) m += kron(ti.conjugate(), ti);
    double log_scale = 0.0;
    double prev = -1.0;
    double k = 1.0;
    for (int j = 0; j < 62; ++j) {
      Vec v = m * vec_eye;
      Eigen::Map<const Mat> x(v.data(), d, d);
      double nx = op_norm(Mat(x));
      if (nx == 0.0) return 0.0;
      double r = std::exp((log_scale + std::log(nx)) / (2.0 * k));
      if (prev > 0.0 && std::abs(r - prev) <= 1e-6 * r) return r;
      prev = r;
      Mat sq = m * m;
      double c = sq.cwiseAbs().maxCoeff();
      if (c == 0.0) return 0.0;
      m = sq / c;
      log_scale = 2.0 * log_scale + std::log(c);
      k *= 2.0;
    }
    return prev;
  }

  Mat x = eye;
  double log_scale = 0.0;
  double prev = -1.0;
  for (int k = 1; k <= 1 << 14; ++k) {
    x = cp_map(t, x);
    double nx = op_norm(x);
    if (nx == 0.0) return 0.0;
    x /= nx;
    log_scale += std::log(nx);
    if ((k & (k - 1)) == 0) {
      double r = std::exp(log_scale / (2.0 * k));
      if (prev > 0.0 && std::abs(r - prev) <= 1e-6 * r) return r;
      prev = r;
    }
  }
  return std::exp(log_scale / (2.0 * (1 << 14)));
}

std::vector<double> check_constraints(const Tuple& t, const std::vector<NcPolynomial>& gens) {
  std::vector<double> out;
  for (const auto& p : gens) out.push_back(op_norm(evaluate_polynomial(p, t)));
  return out;
}

bool satisfies_constraints(const Tuple& t, const std::vector<NcPolynomial>& gens, double tol) {
  for (double r : check_constraints(t, gens))
    if (r > tol) return false;
  return true;
}

}  // namespace ncmodel
