#pragma once

#include "ncmodel/ideal.hpp"
#include "ncmodel/row.hpp"

#include <optional>
#include <vector>

namespace ncmodel {

struct PoissonKernel {
  RowContraction scaled;  // r T; the radial kernel of T is the kernel of rT
  double r = 1.0;
  int N = 0;
  // Rows are ambient_index * d + k, with d = dim D_{T,r}.
  Mat matrix;
  Mat defect_basis;
  TruncatedFock fock{1, 0};
  ConstrainedSubspacePtr cs;  // set for the constrained kernel
  ConstrainedShifts shifts;
  double isometry_defect = 0.0;  // ||K^*K - (I - Q)||, Q = 0 for r < 1
  double tail_budget = 0.0;      // ||r^{2(N+1)} Phi^{N+1}(I)||
  std::optional<PurityResult> purity;
  double range_residual = 0.0;  // ||(I - P_{N_J} (x) I) K_T||, constrained only
  double range_budget = 0.0;

  bool constrained() const { return static_cast<bool>(cs); }
  Index defect_dim() const { return defect_basis.cols(); }
};

PoissonKernel poisson_kernel(const RowContraction& rc, double r, const TruncatedFock& fock);
PoissonKernel constrained_poisson_kernel(const RowContraction& rc, ConstrainedSubspacePtr cs);

// Raw kernel blocks: rows alpha * d + k hold E^* Delta_T T_alpha^*.
Mat kernel_matrix(const RowContraction& rc, const TruncatedFock& fock);

struct IntertwiningResult {
  double residual = 0.0;       // on outputs of degree <= N-1, where truncation is exact
  double full_residual = 0.0;  // including the top slice
  std::vector<double> per_generator;
};

// max_i ||K (r T_i)^* - (S_i^* (x) I) K||, or with B_i^* for the constrained kernel.
IntertwiningResult intertwining_check(const PoissonKernel& kernel);

// K^* (S_alpha S_beta^* (x) I) K for an explicit kernel matrix.
Mat poisson_transform_truncated(const PoissonKernel& kernel, const Word& alpha, const Word& beta);

struct PoissonTransformResult {
  std::vector<double> r_values;
  std::vector<Mat> values;
  std::vector<double> deviations;  // ||value - T_alpha T_beta^*||
  Mat target;
  Mat limit_estimate;  // value at the last r
  Mat richardson;      // linear extrapolation in (1 - r) from the last two r
  double deviation = 0.0;
};

// Evaluates K_{T,r}^*(S_alpha S_beta^* (x) I)K_{T,r} by summing the slice
// series sum_gamma r^{2|gamma|} T_gamma Delta_r^2 T_gamma^* in H until the
// remaining tail is below 1e-15, so no Fock truncation enters.
PoissonTransformResult poisson_transform(const RowContraction& rc, const Word& alpha,
                                         const Word& beta,
                                         std::vector<double> r_values = {0.9, 0.99, 0.999});

struct GramResult {
  Mat gram;
  double defect = 0.0;  // ||K^*K - (I - Q)||
  double budget = 0.0;  // ||Phi^{N+1}(I)||
  bool within_budget = false;
  PurityResult purity;
};

GramResult kernel_gram(const RowContraction& rc, const TruncatedFock& fock);

}  // namespace ncmodel
