#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace ncmodel {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;
using Tuple = std::vector<Mat>;

// Singular values below kRankCutoff * max(sigma_max, floor) count as zero.
inline constexpr double kRankCutoff = 1e-9;

Mat identity(Index n);
Mat kron(const Mat& a, const Mat& b);

// Largest singular value; 0 for empty matrices.
double op_norm(const Mat& a);

struct HermitianEigen {
  Eigen::VectorXd values;  // decreasing
  Mat vectors;
};
HermitianEigen hermitian_eigen(const Mat& a);

// Square root of a Hermitian PSD matrix. Eigenvalues in [-neg_tol, 0) are
// clamped to zero; anything more negative is an error.
Mat psd_sqrt(const Mat& a, double neg_tol = 1e-12);

// Orthonormal basis of the range of a (thin SVD, cutoff relative to
// max(sigma_max, floor)).
Mat range_basis(const Mat& a, double floor = 0.0);
Index numerical_rank(const Mat& a, double floor = 0.0);

// Eigenvectors of a Hermitian PSD matrix with eigenvalue above the cutoff,
// ordered by decreasing eigenvalue.
Mat psd_range_basis(const Mat& a, double floor = 0.0);
Index psd_rank(const Mat& a, double floor = 0.0);

// Orthonormal complement of the span of an orthonormal column set in C^dim.
Mat complement_basis(const Mat& basis, Index dim);

// Rotates each column so its first largest-modulus entry is real positive.
void normalize_phases(Mat& cols);

// Largest principal angle between the spans of two orthonormal column sets;
// pi/2 if the dimensions differ.
double max_principal_angle(const Mat& u, const Mat& v);

double row_contraction_norm(const Tuple& t);  // ||sum T_i T_i^*||
Mat row_operator(const Tuple& t);             // [T_1 ... T_n]
void check_square_tuple(const Tuple& t, const char* what);

}  // namespace ncmodel
