#include "ncmodel/linalg.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace ncmodel;
using namespace ncmodel::testing;

TEST(Linalg, KronAndNorm) {
  Mat a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  Mat k = kron(a, identity(2));
  EXPECT_EQ(k(2, 0), cplx(3.0));
  EXPECT_EQ(k(3, 1), cplx(3.0));
  EXPECT_EQ(k(2, 1), cplx(0.0));
  Mat d = Mat::Zero(3, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  EXPECT_NEAR(op_norm(d), 4.0, 1e-14);
}

TEST(Linalg, PsdSqrt) {
  std::mt19937_64 gen(2);
  Mat b = random_matrix(4, 4, gen);
  Mat a = b * b.adjoint();
  Mat r = psd_sqrt(a);
  EXPECT_LE((r * r - a).norm(), 1e-10);
  EXPECT_LE((r - r.adjoint()).norm(), 1e-14);
}

TEST(Linalg, RangeAndComplement) {
  std::mt19937_64 gen(3);
  Mat b = random_matrix(6, 2, gen);
  Mat a = b * random_matrix(2, 5, gen);
  EXPECT_EQ(numerical_rank(a), 2);
  Mat u = range_basis(a);
  ASSERT_EQ(u.cols(), 2);
  EXPECT_LE((u.adjoint() * u - identity(2)).norm(), 1e-12);
  Mat c = complement_basis(u, 6);
  EXPECT_EQ(c.cols(), 4);
  EXPECT_LE((u.adjoint() * c).norm(), 1e-12);
  EXPECT_LE(max_principal_angle(u, range_basis(b)), 1e-8);
  EXPECT_EQ(psd_rank(a * a.adjoint()), 2);
}

TEST(Linalg, RankFloorIgnoresTinyMatrices) {
  Mat a = Mat::Identity(3, 3) * 1e-12;
  EXPECT_EQ(numerical_rank(a), 3);
  EXPECT_EQ(numerical_rank(a, 1.0), 0);
}

TEST(Linalg, StructuredWideMatrixHasNoNan) {
  // zero-padded permutation-like blocks used to trip the divide-and-conquer SVD
  Mat a = Mat::Zero(31, 48);
  for (Index j = 0; j < 48; ++j) a((j * 7) % 31, j) = (j % 3 == 0) ? 1.0 : 0.5;
  Mat u = range_basis(a, 1.0);
  EXPECT_FALSE(u.hasNaN());
  EXPECT_EQ(u.cols(), numerical_rank(a, 1.0));
}
