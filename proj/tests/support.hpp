#pragma once

#include "ncmodel/linalg.hpp"

#include <Eigen/QR>

#include <cmath>
#include <random>

namespace ncmodel::testing {

inline Mat random_matrix(Index r, Index c, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  Mat m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = cplx(nd(gen), nd(gen));
  return m;
}

inline Mat random_unitary(Index d, std::mt19937_64& gen) {
  Eigen::HouseholderQR<Mat> qr(random_matrix(d, d, gen));
  return qr.householderQ() * Mat::Identity(d, d);
}

// Scales a tuple so that ||sum T_i T_i^*|| = target.
inline Tuple scale_to(Tuple t, double target) {
  double nrm = row_contraction_norm(t);
  if (nrm > 0)
    for (auto& m : t) m *= std::sqrt(target / nrm);
  return t;
}

inline Tuple random_tuple(int n, Index d, double target, std::mt19937_64& gen) {
  Tuple t;
  for (int i = 0; i < n; ++i) t.push_back(random_matrix(d, d, gen));
  return scale_to(std::move(t), target);
}

// U diag(mu_i) U^*, a commuting normal tuple.
inline Tuple random_commuting(int n, Index d, double target, std::mt19937_64& gen) {
  Mat u = random_unitary(d, gen);
  Tuple t;
  for (int i = 0; i < n; ++i) {
    Vec mu = random_matrix(d, 1, gen);
    t.push_back(u * mu.asDiagonal() * u.adjoint());
  }
  return scale_to(std::move(t), target);
}

// Commuting nilpotent pair on C^3: T_1 e_0 = e_1, T_2 e_0 = e_2 (scaled).
inline Tuple nilpotent_pair(double s = 0.5) {
  Mat a = Mat::Zero(3, 3), b = Mat::Zero(3, 3);
  a(1, 0) = s;
  b(2, 0) = s;
  return {a, b};
}

inline Tuple scalar_tuple(std::initializer_list<cplx> vals) {
  Tuple t;
  for (cplx v : vals) t.push_back(Mat::Constant(1, 1, v));
  return t;
}

inline Tuple direct_sum(const Tuple& a, const Tuple& b) {
  Tuple out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Index p = a[i].rows(), q = b[i].rows();
    Mat m = Mat::Zero(p + q, p + q);
    m.topLeftCorner(p, p) = a[i];
    m.bottomRightCorner(q, q) = b[i];
    out.push_back(m);
  }
  return out;
}

}  // namespace ncmodel::testing
