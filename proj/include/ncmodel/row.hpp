#pragma once

#include "ncmodel/ideal.hpp"
#include "ncmodel/linalg.hpp"

#include <vector>

namespace ncmodel {

inline constexpr double kRowContractionTol = 1e-10;

class RowContraction {
 public:
  // Throws NotRowContraction if ||sum T_i T_i^*|| > 1 + kRowContractionTol.
  static RowContraction validate(Tuple t);

  int n() const { return static_cast<int>(t_.size()); }
  Index dim() const { return t_[0].rows(); }
  const Tuple& ops() const { return t_; }
  const Mat& op(int i) const { return t_[i - 1]; }  // 1-based
  const Mat& row() const { return row_; }           // [T_1 ... T_n]

  const Mat& delta() const { return delta_; }            // (I - sum T_i T_i^*)^{1/2}
  const Mat& delta_star() const { return delta_star_; }  // (I - T^*T)^{1/2} on H^(n)
  const Mat& defect_basis() const { return dt_basis_; }
  const Mat& defect_star_basis() const { return dts_basis_; }
  Index defect_rank() const { return dt_basis_.cols(); }
  Index defect_star_rank() const { return dts_basis_.cols(); }

  // E_T^* Delta_T and Delta_{T*} E_{T*}: defect operators in defect coordinates.
  Mat delta_coords() const { return dt_basis_.adjoint() * delta_; }
  Mat delta_star_coords() const { return delta_star_ * dts_basis_; }
  // -T compressed to D_{T*} -> D_T.
  Mat minus_t_coords() const { return -(dt_basis_.adjoint() * row_ * dts_basis_); }

  double norm() const { return norm_; }  // ||sum T_i T_i^*||

 private:
  Tuple t_;
  Mat row_;
  Mat delta_;
  Mat delta_star_;
  Mat dt_basis_;
  Mat dts_basis_;
  double norm_ = 0.0;
};

Mat cp_map(const Tuple& t, const Mat& x);
Mat cp_apply(const Tuple& t, const Mat& x, int k);
inline Mat cp_apply(const RowContraction& rc, const Mat& x, int k) { return cp_apply(rc.ops(), x, k); }

struct PurityResult {
  Mat Q;  // limit of Phi^k(I)
  bool is_pure = false;
  bool converged = false;
  int k_used = 0;
  double last_step = 0.0;
};

// Iterates X <- Phi(X) from I. Stops when the geometric tail estimate of the
// remaining decrease drops below tol (or the step itself is negligible).
PurityResult purity(const Tuple& t, double tol = 1e-10, int k_max = 10000);
inline PurityResult purity(const RowContraction& rc, double tol = 1e-10, int k_max = 10000) {
  return purity(rc.ops(), tol, k_max);
}

// lim ||Phi^k(I)||^{1/2k}, evaluated along k = 2^j by squaring the matrix
// of Phi until the relative change is below 1e-6.
double spectral_radius(const Tuple& t);
inline double spectral_radius(const RowContraction& rc) { return spectral_radius(rc.ops()); }

std::vector<double> check_constraints(const Tuple& t, const std::vector<NcPolynomial>& gens);
bool satisfies_constraints(const Tuple& t, const std::vector<NcPolynomial>& gens,
                           double tol = 1e-10);

}  // namespace ncmodel
