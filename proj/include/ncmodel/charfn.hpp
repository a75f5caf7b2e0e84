#pragma once

#include "ncmodel/ideal.hpp"
#include "ncmodel/row.hpp"

#include <string>
#include <vector>

namespace ncmodel {

enum class Flavor { standard, constrained };

// Fourier coefficients theta_(alpha) of M = sum_alpha R_alpha (x) theta_(alpha),
// indexed by the words of a TruncatedFock of degree max_degree.
struct MultiAnalyticOperator {
  int n = 1;
  int max_degree = 0;
  TruncatedFock words{1, 0};
  std::vector<Mat> coeffs;
  Index source_dim = 0;
  Index target_dim = 0;
  Flavor flavor = Flavor::standard;
  ConstrainedSubspacePtr cs;

  const Mat& coefficient(const Word& w) const;
};

MultiAnalyticOperator characteristic_coefficients(const RowContraction& rc, int max_degree);
MultiAnalyticOperator constrained_characteristic(const RowContraction& rc, ConstrainedSubspacePtr cs,
                                                 int max_degree);
// theta_(g0) = c, all other coefficients zero.
MultiAnalyticOperator constant_symbol(int n, int max_degree, const Mat& c);

// sum_alpha R_alpha (x) theta_(alpha) (x) I_m on F_{<=N}.
Mat assemble(const MultiAnalyticOperator& op, const TruncatedFock& fock, Index multiplicity = 1);
// sum_alpha W_alpha (x) theta_(alpha) (x) I_m on N_J, summed Horner-style over the word tree.
Mat assemble(const MultiAnalyticOperator& op, const ConstrainedSubspace& cs,
             const ConstrainedShifts& shifts, Index multiplicity = 1);
// Coefficients weighted by r^{|alpha|}.
Mat assemble_radial(const MultiAnalyticOperator& op, const TruncatedFock& fock, double r);

// max_i ||M (S_i (x) I) - (S_i (x) I) M|| on inputs of degree <= N-1.
double analyticity_residual(const Mat& assembled, const TruncatedFock& fock, Index source_dim,
                            Index target_dim);
// max_i ||M (B_i (x) I) - (B_i (x) I) M|| on N_J intersected with degree <= N-1.
double analyticity_residual(const Mat& assembled, const ConstrainedSubspace& cs,
                            const ConstrainedShifts& shifts, Index source_dim, Index target_dim);

// -I(x)T + (I(x)Delta_T)(I - sum X_i(x)T_i^*)^{-1} Xhat (I(x)Delta_{T*}) in defect
// coordinates; no spectral radius check (nilpotent X such as R or W is fine).
Mat symbol_at(const RowContraction& rc, const Tuple& x);
// Same after checking r(X) < 1.
Mat point_evaluate(const RowContraction& rc, const Tuple& x);
// sum_{|alpha| <= max_degree} X_alpha (x) theta_(alpha)
Mat partial_sum(const MultiAnalyticOperator& op, const Tuple& x);

struct FactorizationReport {
  std::string mode;
  double residual = 0.0;
  double budget = 0.0;  // epsilon_N for truncated modes, tolerance for point modes
  double min_eigenvalue = 0.0;
  double spectral_radius = 0.0;
  bool pass = false;
};

FactorizationReport verify_point(const RowContraction& rc, const Tuple& x, double tol = 1e-9);
FactorizationReport verify_constrained_point(const RowContraction& rc,
                                             const std::vector<NcPolynomial>& gens, const Tuple& x,
                                             double tol = 1e-9);
FactorizationReport verify_truncated(const RowContraction& rc, const TruncatedFock& fock);
FactorizationReport verify_constrained_truncated(const RowContraction& rc,
                                                 ConstrainedSubspacePtr cs);

struct TwoPathReport {
  double coefficient_path = 0.0;  // ||sum W_alpha (x) theta_alpha - compression||
  double resolvent_path = 0.0;    // ||Theta(W) - compression||
};

// Compares both constrained assemblies with the compression of the standard one.
TwoPathReport constrained_two_path(const RowContraction& rc, ConstrainedSubspacePtr cs);

// max_alpha ||tau theta_(alpha) - theta'_(alpha) tau'|| for T'_i = U T_i U^*.
double unitary_invariance_check(const RowContraction& rc, const Mat& U, int max_degree = 4);

}  // namespace ncmodel
