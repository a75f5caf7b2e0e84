#include "ncmodel/linalg.hpp"

#include "ncmodel/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ncmodel {

Mat identity(Index n) { return Mat::Identity(n, n); }

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double op_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 || a.cols() == 1) return a.norm();
  // Gram matrix on the short side keeps big tall blocks cheap.
  Mat g = a.cols() <= a.rows() ? Mat(a.adjoint() * a) : Mat(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

HermitianEigen hermitian_eigen(const Mat& a) {
  HermitianEigen out;
  if (a.rows() == 0) {
    out.values.resize(0);
    out.vectors.resize(0, 0);
    return out;
  }
  Mat h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Index n = h.rows();
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

Mat psd_sqrt(const Mat& a, double neg_tol) {
  HermitianEigen e = hermitian_eigen(a);
  Eigen::VectorXd s(e.values.size());
  for (Index k = 0; k < e.values.size(); ++k) {
    double v = e.values(k);
    if (v < -neg_tol)
      throw Error(ErrorKind::precondition, "matrix square root of a non-PSD matrix");
    s(k) = std::sqrt(std::max(0.0, v));
  }
  return e.vectors * s.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

namespace {

// Eigen 3.4's divide-and-conquer SVD silently misreports ranks (and sometimes
// returns NaNs) on the structured 0/1 matrices built here; QR-preconditioned
// Jacobi is reliable and the short side is always small.
struct ThinSvd {
  Eigen::VectorXd s;
  Mat u;
};

ThinSvd thin_svd(const Mat& a, bool want_u) {
  Eigen::JacobiSVD<Mat> svd(a, want_u ? Eigen::ComputeThinU : 0);
  return {svd.singularValues(), want_u ? Mat(svd.matrixU()) : Mat()};
}

}  // namespace

Mat range_basis(const Mat& a, double floor) {
  if (a.size() == 0) return Mat(a.rows(), 0);
  ThinSvd svd = thin_svd(a, true);
  const auto& s = svd.s;
  double cut = kRankCutoff * std::max(s.size() ? s(0) : 0.0, floor);
  Index r = 0;
  while (r < s.size() && s(r) > cut && s(r) > 0.0) ++r;
  Mat out = svd.u.leftCols(r);
  normalize_phases(out);
  return out;
}

Index numerical_rank(const Mat& a, double floor) {
  if (a.size() == 0) return 0;
  Eigen::VectorXd s = thin_svd(a, false).s;
  double cut = kRankCutoff * std::max(s.size() ? s(0) : 0.0, floor);
  Index r = 0;
  while (r < s.size() && s(r) > cut && s(r) > 0.0) ++r;
  return r;
}

Mat psd_range_basis(const Mat& a, double floor) {
  HermitianEigen e = hermitian_eigen(a);
  if (e.values.size() == 0) return Mat(a.rows(), 0);
  double cut = kRankCutoff * std::max(e.values(0), floor);
  Index r = 0;
  while (r < e.values.size() && e.values(r) > cut && e.values(r) > 0.0) ++r;
  Mat out = e.vectors.leftCols(r);
  normalize_phases(out);
  return out;
}

Index psd_rank(const Mat& a, double floor) { return psd_range_basis(a, floor).cols(); }

Mat complement_basis(const Mat& basis, Index dim) {
  if (basis.cols() == 0) return identity(dim);
  if (basis.cols() >= dim) return Mat(dim, 0);
  Eigen::HouseholderQR<Mat> qr(basis);
  Mat q = qr.householderQ() * identity(dim);
  Mat out = q.rightCols(dim - basis.cols());
  normalize_phases(out);
  return out;
}

void normalize_phases(Mat& cols) {
  for (Index j = 0; j < cols.cols(); ++j) {
    Index best = 0;
    double mag = -1.0;
    for (Index i = 0; i < cols.rows(); ++i) {
      double m = std::abs(cols(i, j));
      if (m > mag * (1.0 + 1e-12)) {
        mag = m;
        best = i;
      }
    }
    if (mag > 0.0) cols.col(j) *= std::conj(cols(best, j)) / mag;
  }
}

double max_principal_angle(const Mat& u, const Mat& v) {
  if (u.cols() != v.cols()) return std::numbers::pi / 2;
  if (u.cols() == 0) return 0.0;
  Mat resid = v - u * (u.adjoint() * v);
  return std::asin(std::min(1.0, op_norm(resid)));
}

double row_contraction_norm(const Tuple& t) {
  if (t.empty()) return 0.0;
  Mat s = Mat::Zero(t[0].rows(), t[0].rows());
  for (const auto& ti : t) s += ti * ti.adjoint();
  return op_norm(s);
}

Mat row_operator(const Tuple& t) {
  if (t.empty()) return Mat();
  const Index d = t[0].rows();
  Mat out(d, d * static_cast<Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) out.middleCols(static_cast<Index>(i) * d, d) = t[i];
  return out;
}

void check_square_tuple(const Tuple& t, const char* what) {
  if (t.empty()) throw Error(ErrorKind::invalid_parameter, std::string(what) + ": empty tuple");
  const Index d = t[0].rows();
  for (const auto& m : t)
    if (m.rows() != d || m.cols() != d)
      throw Error(ErrorKind::invalid_parameter,
                  std::string(what) + ": tuple entries must be square matrices of equal size");
}

}  // namespace ncmodel
