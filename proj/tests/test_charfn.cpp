#include "ncmodel/charfn.hpp"
#include "ncmodel/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace ncmodel;
using namespace ncmodel::testing;

namespace {

Tuple random_point(int n, double radius, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  std::vector<cplx> z(n);
  double s = 0.0;
  for (auto& v : z) {
    v = cplx(nd(gen), nd(gen));
    s += std::norm(v);
  }
  std::uniform_real_distribution<double> u(0.0, radius);
  double r = u(gen) / std::sqrt(s);
  Tuple x;
  for (auto v : z) x.push_back(Mat::Constant(1, 1, r * v));
  return x;
}

}  // namespace

TEST(Coefficients, ZeroScalarIsIdentitySymbol) {
  auto rc = RowContraction::validate(scalar_tuple({0.0}));
  auto op = characteristic_coefficients(rc, 4);
  EXPECT_EQ(op.coefficient(Word()).norm(), 0.0);
  EXPECT_NEAR(std::abs(op.coefficient(Word({1}))(0, 0) - 1.0), 0.0, 1e-15);
  for (int k = 2; k <= 4; ++k) EXPECT_EQ(op.coefficient(Word(std::vector<int>(k, 1))).norm(), 0.0);
}

TEST(Coefficients, ScalarMobius) {
  const cplx t(0.3, 0.4);
  auto rc = RowContraction::validate(scalar_tuple({t}));
  auto op = characteristic_coefficients(rc, 6);
  EXPECT_NEAR(std::abs(op.coefficient(Word())(0, 0) + t), 0.0, 1e-15);
  for (int k = 1; k <= 6; ++k) {
    cplx expect = (1.0 - std::norm(t)) * std::pow(std::conj(t), k - 1);
    EXPECT_NEAR(std::abs(op.coefficient(Word(std::vector<int>(k, 1)))(0, 0) - expect), 0.0, 1e-14);
  }
}

TEST(Coefficients, CoisometryIsConstant) {
  auto rc = RowContraction::validate(scalar_tuple({std::sqrt(0.5), std::sqrt(0.5)}));
  auto op = characteristic_coefficients(rc, 3);
  EXPECT_EQ(op.target_dim, 0);
  EXPECT_EQ(op.source_dim, 1);
}

TEST(Assemble, IdentitySymbolAndShift) {
  TruncatedFock f(2, 3);
  auto id = constant_symbol(2, 3, identity(2));
  EXPECT_LE((assemble(id, f) - identity(f.dim() * 2)).norm(), 1e-15);
  auto rc = RowContraction::validate(scalar_tuple({0.0}));
  TruncatedFock g(1, 4);
  Mat m = assemble(characteristic_coefficients(rc, 4), g);
  EXPECT_LE((m - creation_matrix(g, Side::right, 1)).norm(), 1e-15);
}

TEST(Assemble, MultiAnalyticOnLowDegrees) {
  std::mt19937_64 gen(1);
  auto rc = RowContraction::validate(random_tuple(2, 2, 0.9, gen));
  TruncatedFock f(2, 4);
  auto op = characteristic_coefficients(rc, 4);
  Mat m = assemble(op, f);
  EXPECT_LE(analyticity_residual(m, f, op.source_dim, op.target_dim), 1e-10);
}

TEST(Assemble, ReversalConventionAgainstPointEvaluation) {
  // Noncommuting matrix points detect a reversed coefficient pairing.
  std::mt19937_64 gen(2);
  auto rc = RowContraction::validate(random_tuple(2, 2, 0.8, gen));
  auto op = characteristic_coefficients(rc, 12);
  Tuple x = scale_to(random_tuple(2, 2, 1.0, gen), 0.01);
  EXPECT_LE((partial_sum(op, x) - point_evaluate(rc, x)).norm(), 1e-10);
}

TEST(PointEvaluate, ZeroPoint) {
  std::mt19937_64 gen(3);
  auto rc = RowContraction::validate(random_tuple(2, 2, 0.7, gen));
  Tuple zero{Mat::Zero(1, 1), Mat::Zero(1, 1)};
  EXPECT_LE((point_evaluate(rc, zero) - rc.minus_t_coords()).norm(), 1e-14);
}

TEST(PointEvaluate, ScalarMobius) {
  const cplx t(0.5, -0.2), z(0.1, 0.6);
  auto rc = RowContraction::validate(scalar_tuple({t}));
  Mat v = point_evaluate(rc, scalar_tuple({z}));
  EXPECT_NEAR(std::abs(v(0, 0) - (z - t) / (1.0 - std::conj(t) * z)), 0.0, 1e-14);
}

TEST(PointEvaluate, PartialSumTail) {
  std::mt19937_64 gen(4);
  auto rc = RowContraction::validate(random_tuple(2, 2, 0.9, gen));
  Tuple z = scalar_tuple({0.3, 0.2});
  double nz = std::sqrt(0.13);
  for (int N : {4, 8, 12}) {
    auto op = characteristic_coefficients(rc, N);
    double err = (partial_sum(op, z) - point_evaluate(rc, z)).norm();
    EXPECT_LE(err, 10.0 * std::pow(nz, N + 1) / (1 - nz));
  }
}

TEST(PointEvaluate, OutsideBallIsPrecondition) {
  auto rc = RowContraction::validate(scalar_tuple({0.0}));
  try {
    point_evaluate(rc, scalar_tuple({1.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
  }
}

TEST(Factorization, ZeroScalarClosedForm) {
  auto rc = RowContraction::validate(scalar_tuple({0.0}));
  auto r = verify_point(rc, scalar_tuple({0.5}));
  EXPECT_TRUE(r.pass);
  Mat v = point_evaluate(rc, scalar_tuple({0.5}));
  EXPECT_NEAR(1.0 - std::norm(v(0, 0)), 0.75, 1e-15);
}

TEST(Factorization, RandomCommutingPoints) {
  std::mt19937_64 gen(5);
  for (int n : {1, 2, 3}) {
    auto rc = RowContraction::validate(random_commuting(n, 4, 0.95, gen));
    for (int k = 0; k < 20; ++k) {
      auto r = verify_point(rc, random_point(n, 0.9, gen));
      EXPECT_LE(r.residual, 1e-9);
      EXPECT_GE(r.min_eigenvalue, -1e-9);
    }
  }
}

TEST(Factorization, MatrixPointsNonCommuting) {
  std::mt19937_64 gen(6);
  auto rc = RowContraction::validate(random_tuple(2, 3, 1.0, gen));
  for (int k = 0; k < 10; ++k) {
    Tuple x = scale_to(random_tuple(2, 2, 1.0, gen), 0.8);
    auto r = verify_point(rc, x);
    EXPECT_TRUE(r.pass) << r.residual;
  }
}

TEST(Factorization, TruncatedNilpotentIsExact) {
  auto rc = RowContraction::validate(nilpotent_pair(0.6));
  auto r = verify_truncated(rc, TruncatedFock(2, 3));
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_TRUE(r.pass);
}

TEST(Factorization, TruncatedGenericWithinBudget) {
  std::mt19937_64 gen(7);
  auto rc = RowContraction::validate(random_tuple(2, 2, 0.9, gen));
  auto r = verify_truncated(rc, TruncatedFock(2, 5));
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.residual, r.budget + 1e-10);
}

TEST(Factorization, ConstrainedPointAndTruncated) {
  std::mt19937_64 gen(8);
  auto rc = RowContraction::validate(random_commuting(2, 3, 0.8, gen));
  auto gens = commutator_generators(2);
  auto rp = verify_constrained_point(rc, gens, random_point(2, 0.9, gen));
  EXPECT_TRUE(rp.pass);
  auto cs = build_constrained_subspace(TruncatedFock(2, 5), gens);
  auto rt = verify_constrained_truncated(rc, cs);
  EXPECT_TRUE(rt.pass);
  std::mt19937_64 g2(9);
  auto bad = RowContraction::validate(random_tuple(2, 2, 0.5, g2));
  EXPECT_THROW(verify_constrained_point(bad, gens, random_point(2, 0.5, g2)), Error);
}

TEST(Constrained, FreeIdealMatchesStandard) {
  std::mt19937_64 gen(10);
  auto rc = RowContraction::validate(random_tuple(2, 2, 0.8, gen));
  auto cs = build_constrained_subspace(TruncatedFock(2, 3), {});
  auto tp = constrained_two_path(rc, cs);
  EXPECT_LE(tp.coefficient_path, 1e-10);
  EXPECT_LE(tp.resolvent_path, 1e-10);
}

TEST(Constrained, CommutingTwoPath) {
  std::mt19937_64 gen(11);
  auto rc = RowContraction::validate(random_commuting(2, 3, 0.7, gen));
  auto cs = build_constrained_subspace(TruncatedFock(2, 4), commutator_generators(2));
  auto tp = constrained_two_path(rc, cs);
  EXPECT_LE(tp.coefficient_path, 1e-10);
  EXPECT_LE(tp.resolvent_path, 1e-10);
  auto op = constrained_characteristic(rc, cs, 4);
  auto sh = constrained_shifts(*cs);
  Mat m = assemble(op, *cs, sh);
  EXPECT_LE(analyticity_residual(m, *cs, sh, op.source_dim, op.target_dim), 1e-10);
}

TEST(Constrained, CoisometricCommutingIsConstant) {
  auto rc = RowContraction::validate(scalar_tuple({0.6, 0.8}));
  auto cs = build_constrained_subspace(TruncatedFock(2, 3), commutator_generators(2));
  auto op = constrained_characteristic(rc, cs, 3);
  EXPECT_EQ(op.target_dim, 0);
  auto tp = constrained_two_path(rc, cs);
  EXPECT_LE(tp.coefficient_path, 1e-12);
}

TEST(Radial, EntrywiseConvergence) {
  std::mt19937_64 gen(12);
  auto rc = RowContraction::validate(random_tuple(2, 2, 0.9, gen));
  TruncatedFock f(2, 3);
  auto op = characteristic_coefficients(rc, 3);
  Mat full = assemble(op, f);
  double prev = 1e300;
  for (double r : {0.9, 0.99, 0.999}) {
    double err = (assemble_radial(op, f, r) - full).cwiseAbs().maxCoeff();
    EXPECT_LE(err, prev);
    prev = err;
  }
  EXPECT_LE(prev, 1e-2);
}

TEST(UnitaryInvariance, Cases) {
  std::mt19937_64 gen(13);
  auto rc = RowContraction::validate(random_commuting(2, 3, 0.8, gen));
  EXPECT_LE(unitary_invariance_check(rc, identity(3)), 1e-14);
  EXPECT_LE(unitary_invariance_check(rc, random_unitary(3, gen)), 1e-10);
  auto sc = RowContraction::validate(scalar_tuple({0.3, 0.4}));
  EXPECT_LE(unitary_invariance_check(sc, Mat::Constant(1, 1, std::polar(1.0, 0.7))), 1e-14);
  EXPECT_THROW(unitary_invariance_check(rc, 2.0 * identity(3)), Error);
}
