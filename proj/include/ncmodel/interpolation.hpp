#pragma once

#include "ncmodel/ideal.hpp"

#include <vector>

namespace ncmodel {

using Point = std::vector<cplx>;

struct MembershipResult {
  bool member = false;
  std::vector<double> residuals;  // |p(lambda)| per generator
};

// Evaluates every generator at the commuting scalar point lambda.
MembershipResult variety_membership(const Point& lambda, const std::vector<NcPolynomial>& generators,
                                    double tol = 1e-10);

struct KernelVector {
  Vec coords;                    // Q^* z_lambda
  double eigen_residual = 0.0;   // max_i |B_i^* z - conj(lambda_i) z| / |z|
  double tail_bound = 0.0;       // |lambda|^N
  double projection_residual = 0.0;  // |z - Q Q^* z| / |z|
  bool within_bound = false;
};

// Truncated z_lambda = sum_{|alpha|<=N} conj(lambda_alpha) e_alpha, in nj coordinates.
KernelVector kernel_vector(const ConstrainedSubspace& cs, const ConstrainedShifts& shifts,
                           const Point& lambda, double tol = 1e-10);

struct PickProblem {
  int n = 1;
  std::vector<Point> points;
  Tuple targets;
  std::vector<NcPolynomial> generators;
  double tol = 1e-9;
};

// (i,j) block (I - A_i A_j^*) / (1 - <lambda_i, lambda_j>), exactly Hermitian.
Mat pick_matrix(const PickProblem& problem);

struct PickResult {
  bool feasible = false;
  bool marginal = false;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double band = 0.0;
  Vec certificate;  // eigenvector of lambda_min, empty when feasible
  Mat matrix;
};

PickResult pick_feasible(const PickProblem& problem);
PickResult pick_feasible(const PickProblem& problem, double tol);

}  // namespace ncmodel
