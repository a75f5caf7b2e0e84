#pragma once

#include "ncmodel/ideal.hpp"
#include "ncmodel/poisson.hpp"
#include "ncmodel/row.hpp"

#include <vector>

namespace ncmodel {

struct DilationBlocks {
  RowContraction rc;
  ConstrainedSubspacePtr cs;
  ConstrainedShifts shifts;
  PoissonKernel kernel;  // K_{J,T}
  Mat Q;                 // lim Phi^k(I)
  Mat K_basis;           // orthonormal basis of cl(Q^{1/2} H) inside H
  Mat Y;                 // Q^{1/2} in K coordinates (dim K x dim H)
  Tuple Z;
  Mat V;        // [K_{J,T}; Y]
  Tuple V_ops;  // diag(B_i (x) I_{D_T}, Z_i)
  double isometry_defect = 0.0;
  double isometry_budget = 0.0;
  double cuntz_defect = 0.0;  // ||sum Z_i Z_i^* - I_K||
  std::vector<double> generator_residuals;  // ||p(Z)||
  Index dilation_index = 0;
};

DilationBlocks build_dilation(const RowContraction& rc, ConstrainedSubspacePtr cs);

struct DilationResidual {
  double residual = 0.0;         // max_i ||V T_i^* - V_i^* V||
  double window_residual = 0.0;  // shift block restricted to degrees <= N-1
  double budget = 0.0;           // ||Phi^{N+1}(I)||^{1/2} + 1e-10
  bool pass = false;
};

DilationResidual verify_dilation(const DilationBlocks& blocks);

Index dilation_index(const RowContraction& rc);

struct WoldSplit {
  Tuple V;
  Mat Q;  // I - sum V_i V_i^*
  double idempotency_defect = 0.0;
  Mat K0_basis;         // span of V_alpha Q K
  Mat K0_kernel_basis;  // kernel of lim sum V_alpha V_alpha^*
  Mat K1_basis;
  double discrepancy = 0.0;  // largest principal angle between the two K0
  Index multiplicity = 0;
  bool converged = false;
};

// k_max < 0 means dim K.
WoldSplit wold_decompose(const Tuple& V, int k_max = -1);

struct ShiftMultiplicity {
  Index mult = 0;
  bool is_shift = false;
};

ShiftMultiplicity shift_multiplicity(const Tuple& V);

struct ModelSpace {
  Mat basis;  // H_model inside N_J (x) D_T, nj coordinates
  Tuple compressed;
  Mat U;  // H -> H_model through K_{J,T}
  double complement_residual = 0.0;   // ||P_H + Theta Theta^* - I||
  double projection_residual = 0.0;   // ||P_H - K K^*||
  double budget = 0.0;                // ||Phi^{N+1}(I)|| + 1e-10
  double equivalence_residual = 0.0;  // max_i ||C_i U - U T_i||
  double unitarity_residual = 0.0;    // ||U^*U - I||
};

ModelSpace model_space(const RowContraction& rc, ConstrainedSubspacePtr cs);

struct MaximalPiece {
  Mat basis;       // M_C
  Mat span_basis;  // span of V_alpha phi(V) h
};

// k_max < 0 means dim of the space.
MaximalPiece maximal_constrained_piece(const Tuple& V, const std::vector<NcPolynomial>& polys,
                                       int k_max = -1);

// Maximal piece of the truncated left creation tuple against cs; returns the
// projection distance to N_J on degrees <= safe degree.
double maximal_piece_residual(const ConstrainedSubspace& cs);

}  // namespace ncmodel
