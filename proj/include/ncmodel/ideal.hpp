#pragma once

#include "ncmodel/fock.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace ncmodel {

class NcPolynomial {
 public:
  NcPolynomial() = default;
  static NcPolynomial monomial(const Word& w, cplx c = 1.0);

  // Adds c to the coefficient of w; exact zeros are dropped.
  NcPolynomial& add_term(const Word& w, cplx c);
  const std::map<Word, cplx>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  int degree() const;      // -1 for the zero polynomial
  int min_degree() const;  // -1 for the zero polynomial
  bool is_homogeneous() const;
  int max_letter() const;
  cplx constant_term() const;
  std::string str() const;

  friend NcPolynomial operator+(NcPolynomial a, const NcPolynomial& b);
  friend NcPolynomial operator-(NcPolynomial a, const NcPolynomial& b);
  friend NcPolynomial operator*(cplx c, NcPolynomial p);

 private:
  std::map<Word, cplx> terms_;
};

// sum_alpha c_alpha T_alpha with T_alpha = T_{i1} ... T_{ik}.
Mat evaluate_polynomial(const NcPolynomial& p, const Tuple& t);
// Same, at a commuting scalar point.
cplx evaluate_polynomial(const NcPolynomial& p, const std::vector<cplx>& lambda);

// g_i g_j - g_j g_i, i < j
std::vector<NcPolynomial> commutator_generators(int n);
// g_j g_i - q(i,j) g_i g_j, i < j
std::vector<NcPolynomial> q_commutator_generators(int n, const Mat& q);
// every word of length m
std::vector<NcPolynomial> truncation_generators(int n, int m);

enum class BuildMode { automatic, generic };

// N_J inside F_{<=N} together with the data needed by the constrained shifts.
class ConstrainedSubspace {
 public:
  ConstrainedSubspace(TruncatedFock fock, std::vector<NcPolynomial> generators,
                      BuildMode mode = BuildMode::automatic);

  const TruncatedFock& fock() const { return fock_; }
  int n() const { return fock_.n(); }
  int degree() const { return fock_.degree(); }
  const std::vector<NcPolynomial>& generators() const { return generators_; }
  const Mat& basis() const { return basis_; }
  Index dim() const { return basis_.cols(); }
  bool graded() const { return graded_; }
  const std::string& warning() const { return warning_; }
  int max_generator_degree() const;
  // Highest degree on which identity checks are exact.
  int safe_degree() const;

  // Degree of each basis column, or -1 when not graded.
  const std::vector<int>& column_degrees() const { return degrees_; }
  Index slice_dim(int m) const;

  Mat projection() const;
  bool contains_vacuum() const;
  // Q^* e_0; precondition error unless 1 lies in N_J.
  Vec vacuum_coords() const;
  // Orthonormal nj coordinates of N_J intersected with F_{<=k}.
  Mat window(int k) const;

  Mat lift(const Mat& coords, Index block = 1) const;      // (Q (x) I) x
  Mat compress(const Mat& ambient, Index block = 1) const;  // (Q^* (x) I) x

 private:
  void build_graded();
  void build_generic();

  TruncatedFock fock_;
  std::vector<NcPolynomial> generators_;
  Mat basis_;
  bool graded_ = true;
  std::string warning_;
  std::vector<int> degrees_;
};

using ConstrainedSubspacePtr = std::shared_ptr<const ConstrainedSubspace>;

ConstrainedSubspacePtr build_constrained_subspace(const TruncatedFock& fock,
                                                  std::vector<NcPolynomial> generators,
                                                  BuildMode mode = BuildMode::automatic);

struct ConstrainedShifts {
  Tuple B;  // P S_i P in nj coordinates
  Tuple W;  // P R_i P in nj coordinates
};

ConstrainedShifts constrained_shifts(const ConstrainedSubspace& cs);

struct DefectProjectionCheck {
  double window_residual = 0.0;  // on N_J intersected with F_{<=N-1}
  double full_residual = 0.0;
  Index vacuum_rank = 0;
};

// Compares I - sum B_i B_i^* with the projection onto the vacuum.
DefectProjectionCheck defect_projection_check(const ConstrainedSubspace& cs,
                                              const ConstrainedShifts& shifts);

struct CyclicSpanResult {
  Mat E_basis;     // orthonormal basis of E inside C^D
  Mat span_basis;  // span of (B_alpha (x) I) M
  int support_degree = 0;
  int window_degree = 0;
  double window_residual = 0.0;
  double full_residual = 0.0;
  bool verdict = false;
  bool cyclic = false;  // P_0 M = C^D
};

CyclicSpanResult cyclic_span_check(const ConstrainedSubspace& cs, const ConstrainedShifts& shifts,
                                   Index D, const Mat& M_basis, double tol = 1e-8);

}  // namespace ncmodel
