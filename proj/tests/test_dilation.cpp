#include "ncmodel/dilation.hpp"
#include "ncmodel/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace ncmodel;
using namespace ncmodel::testing;

namespace {

ConstrainedSubspacePtr free_cs(int n, int N) { return build_constrained_subspace(TruncatedFock(n, N), {}); }
ConstrainedSubspacePtr comm_cs(int n, int N) {
  return build_constrained_subspace(TruncatedFock(n, N), commutator_generators(n));
}

Mat jordan(Index d) {
  Mat j = Mat::Zero(d, d);
  for (Index k = 0; k + 1 < d; ++k) j(k + 1, k) = 1.0;
  return j;
}

}  // namespace

TEST(Dilation, ZeroScalarIsPureAndExact) {
  auto rc = RowContraction::validate(scalar_tuple({0.0}));
  auto b = build_dilation(rc, free_cs(1, 4));
  EXPECT_EQ(b.K_basis.cols(), 0);
  EXPECT_EQ(b.dilation_index, 1);
  EXPECT_LE(b.isometry_defect, 1e-14);
  EXPECT_LE(verify_dilation(b).residual, 1e-14);
}

TEST(Dilation, CoisometryIsItsOwnDilation) {
  std::mt19937_64 gen(7);
  Mat u = random_unitary(2, gen);
  auto rc = RowContraction::validate({u * std::sqrt(0.5), u.adjoint() * std::sqrt(0.5)});
  auto b = build_dilation(rc, free_cs(2, 3));
  EXPECT_EQ(rc.defect_rank(), 0);
  EXPECT_EQ(b.K_basis.cols(), 2);
  EXPECT_LE(b.cuntz_defect, 1e-10);
  EXPECT_LE(b.isometry_defect, 1e-10);
  EXPECT_LE(verify_dilation(b).residual, 1e-10);
  EXPECT_EQ(dilation_index(rc), 0);
}

TEST(Dilation, MixedBlockHasCoisometricK) {
  Tuple pure = nilpotent_pair(0.6);
  Tuple cois = scalar_tuple({std::sqrt(0.5), std::sqrt(0.5)});
  auto rc = RowContraction::validate(direct_sum(pure, cois));
  auto b = build_dilation(rc, comm_cs(2, 4));
  EXPECT_EQ(b.K_basis.cols(), 1);
  EXPECT_LE(b.cuntz_defect, 1e-10);
  for (double r : b.generator_residuals) EXPECT_LE(r, 1e-10);
  EXPECT_LE(b.isometry_defect, b.isometry_budget);
  auto v = verify_dilation(b);
  EXPECT_TRUE(v.pass);
  EXPECT_LE(v.residual, 1e-10);
}

TEST(Dilation, RandomCommutingPureWithinBudget) {
  std::mt19937_64 gen(11);
  auto rc = RowContraction::validate(random_commuting(2, 3, 0.2, gen));
  auto b = build_dilation(rc, comm_cs(2, 10));
  EXPECT_LE(b.isometry_defect, b.isometry_budget);
  auto v = verify_dilation(b);
  EXPECT_TRUE(v.pass);
  EXPECT_LE(v.window_residual, 1e-9);
}

TEST(Dilation, ConstraintViolationIsPrecondition) {
  std::mt19937_64 gen(3);
  auto rc = RowContraction::validate(random_tuple(2, 2, 0.5, gen));
  try {
    build_dilation(rc, comm_cs(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
  }
}

TEST(Dilation, IndexCountsDefectEigenvalues) {
  Tuple t = nilpotent_pair(0.5);
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a(1, 0) = 0.5;
  b(1, 0) = 0.3;
  EXPECT_EQ(dilation_index(RowContraction::validate({a, b})), 2);
  EXPECT_EQ(dilation_index(RowContraction::validate(t)), 3);
}

TEST(Wold, UnitaryScalar) {
  auto w = wold_decompose(scalar_tuple({cplx(0.6, 0.8)}));
  EXPECT_EQ(w.K0_basis.cols(), 0);
  EXPECT_EQ(w.K1_basis.cols(), 1);
  EXPECT_EQ(w.multiplicity, 0);
}

TEST(Wold, JordanShift) {
  auto w = wold_decompose({jordan(4)});
  EXPECT_EQ(w.K0_basis.cols(), 4);
  EXPECT_EQ(w.multiplicity, 1);
  EXPECT_LE(w.discrepancy, 1e-8);
  EXPECT_LE(w.idempotency_defect, 1e-14);
}

TEST(Wold, JordanPlusUnitaryAgrees) {
  Tuple v = direct_sum({jordan(3)}, scalar_tuple({cplx(0.0, 1.0)}));
  auto w = wold_decompose(v);
  EXPECT_EQ(w.K0_basis.cols(), 3);
  EXPECT_EQ(w.K1_basis.cols(), 1);
  EXPECT_LE(w.discrepancy, 1e-8);
  EXPECT_NEAR(std::abs(w.K1_basis(3, 0)), 1.0, 1e-12);
}

TEST(ShiftMultiplicity, Basics) {
  auto j = shift_multiplicity({jordan(3)});
  EXPECT_EQ(j.mult, 1);
  EXPECT_TRUE(j.is_shift);
  auto u = shift_multiplicity(scalar_tuple({-1.0}));
  EXPECT_EQ(u.mult, 0);
  EXPECT_FALSE(u.is_shift);
}

TEST(ShiftMultiplicity, ConstrainedShiftTensorIdentity) {
  auto cs = comm_cs(2, 4);
  auto sh = constrained_shifts(*cs);
  for (Index m : {1, 2, 3}) {
    Tuple v;
    for (const auto& b : sh.B) v.push_back(kron(b, identity(m)));
    EXPECT_EQ(shift_multiplicity(v).mult, m);
  }
}

TEST(ModelSpace, ZeroScalarIsConstants) {
  auto rc = RowContraction::validate(scalar_tuple({0.0}));
  auto m = model_space(rc, free_cs(1, 6));
  ASSERT_EQ(m.basis.cols(), 1);
  EXPECT_NEAR(std::abs(m.basis(0, 0)), 1.0, 1e-12);
  EXPECT_LE(m.equivalence_residual, 1e-12);
}

TEST(ModelSpace, ScalarCompressionEqualsT) {
  auto rc = RowContraction::validate(scalar_tuple({0.4}));
  auto m = model_space(rc, free_cs(1, 40));
  EXPECT_EQ(m.basis.cols(), 1);
  EXPECT_NEAR(std::abs(m.compressed[0](0, 0) - 0.4), 0.0, 1e-9);
  EXPECT_LE(m.complement_residual, m.budget);
}

TEST(ModelSpace, NilpotentPair) {
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a(1, 0) = 0.5;
  b(1, 0) = 0.4;
  auto rc = RowContraction::validate({a, b});
  auto m = model_space(rc, comm_cs(2, 3));
  EXPECT_LE(m.equivalence_residual, 1e-9);
  EXPECT_LE(m.unitarity_residual, 1e-9);
  EXPECT_LE(m.complement_residual, m.budget);
  EXPECT_LE(m.projection_residual, m.budget);
}

TEST(ModelSpace, NonPureRejected) {
  auto rc = RowContraction::validate(scalar_tuple({1.0}));
  EXPECT_THROW(model_space(rc, free_cs(1, 4)), Error);
}

TEST(MaximalPiece, TruncatedShiftsRecoverSymmetricSpace) {
  auto cs = comm_cs(2, 4);
  EXPECT_LE(maximal_piece_residual(*cs), 1e-10);
}

TEST(MaximalPiece, CommutingTupleIsWhole) {
  std::mt19937_64 gen(5);
  auto mp = maximal_constrained_piece(random_commuting(2, 3, 0.5, gen), commutator_generators(2));
  EXPECT_EQ(mp.basis.cols(), 3);
}

TEST(MaximalPiece, CoordinateGenerator) {
  // phi = g_1 with V_1 = e_1 e_0^*: span{V_alpha V_1 h} = span{e_1}
  Mat v1 = Mat::Zero(3, 3);
  v1(1, 0) = 0.5;
  Mat v2 = Mat::Zero(3, 3);
  auto mp = maximal_constrained_piece({v1, v2}, {NcPolynomial::monomial(Word({1}))});
  EXPECT_EQ(mp.span_basis.cols(), 1);
  EXPECT_EQ(mp.basis.cols(), 2);
  EXPECT_THROW(maximal_constrained_piece({v1, v2}, {}), Error);
}
