#include "ncmodel/error.hpp"
#include "ncmodel/fock.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace ncmodel;
using namespace ncmodel::testing;

TEST(Word, BasicsAndOrder) {
  Word a{1, 2}, b{2, 1};
  EXPECT_EQ(a.length(), 2);
  EXPECT_EQ(a.reversed(), b);
  EXPECT_EQ(a.reversed().reversed(), a);
  EXPECT_EQ(Word().str(), "g0");
  EXPECT_EQ(a.str(), "g1g2");
  EXPECT_LT(Word({2}), Word({1, 1}));
  EXPECT_LT(a, b);
  EXPECT_EQ(a * b, Word({1, 2, 2, 1}));
  EXPECT_THROW(Word({0}), Error);
}

TEST(EnumerateWords, Counts) {
  auto w = enumerate_words(2, 1);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0], Word());
  EXPECT_EQ(w[1], Word({1}));
  EXPECT_EQ(w[2], Word({2}));
  EXPECT_EQ(enumerate_words(2, 3).size(), 15u);
  EXPECT_EQ(enumerate_words(3, 2).size(), 13u);
  EXPECT_THROW(enumerate_words(0, 2), Error);
  EXPECT_THROW(enumerate_words(2, -1), Error);
}

TEST(TruncatedFock, DimensionsAndIndexing) {
  TruncatedFock f(3, 3);
  EXPECT_EQ(f.dim(), 40);
  EXPECT_EQ(TruncatedFock(1, 5).dim(), 6);
  auto words = enumerate_words(3, 3);
  for (Index k = 0; k < f.dim(); ++k) {
    EXPECT_EQ(f.word(k), words[k]);
    EXPECT_EQ(f.index_of(words[k]), k);
    EXPECT_EQ(f.reversed(k), f.index_of(words[k].reversed()));
  }
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(f.slice_size(k), static_cast<Index>(std::pow(3, k)));
  EXPECT_EQ(f.index_of(Word({1, 1, 1, 1})), -1);
}

TEST(TruncatedFock, ChildrenAndConcat) {
  TruncatedFock f(2, 3);
  for (Index a = 0; a < f.dim(); ++a) {
    Word w = f.word(a);
    for (int i = 1; i <= 2; ++i) {
      Index l = f.left_child(a, i), r = f.right_child(a, i);
      if (w.length() == 3) {
        EXPECT_EQ(l, -1);
        EXPECT_EQ(r, -1);
      } else {
        EXPECT_EQ(f.word(l), Word({i}) * w);
        EXPECT_EQ(f.word(r), w * Word({i}));
        EXPECT_EQ(f.drop_first(l), a);
        EXPECT_EQ(f.drop_last(r), a);
        EXPECT_EQ(f.first_letter(l), i);
        EXPECT_EQ(f.last_letter(r), i);
      }
    }
    for (Index b = 0; b < f.dim(); ++b) {
      Index c = f.concat(a, b);
      if (w.length() + f.length(b) > 3)
        EXPECT_EQ(c, -1);
      else
        EXPECT_EQ(f.word(c), w * f.word(b));
    }
  }
}

TEST(Creation, SingleGeneratorIsJordan) {
  Mat s = creation_matrix(TruncatedFock(1, 2), Side::left, 1);
  Mat j = Mat::Zero(3, 3);
  j(1, 0) = 1.0;
  j(2, 1) = 1.0;
  EXPECT_EQ(s, j);
  EXPECT_THROW(creation_matrix(TruncatedFock(1, 2), Side::left, 2), Error);
}

TEST(Creation, OrthogonalityOnLowDegrees) {
  TruncatedFock f(2, 3);
  Mat s1 = creation_matrix(f, Side::left, 1), s2 = creation_matrix(f, Side::left, 2);
  EXPECT_EQ((s1.adjoint() * s2).norm(), 0.0);
  Index low = f.slice_offset(3);
  Mat g = s1.adjoint() * s1;
  EXPECT_EQ((g.topLeftCorner(low, low) - identity(low)).norm(), 0.0);
  EXPECT_EQ(g.bottomRightCorner(f.dim() - low, f.dim() - low).norm(), 0.0);
}

TEST(Creation, ExplicitActions) {
  TruncatedFock f(2, 2);
  Mat s1 = creation_matrix(f, Side::left, 1), r1 = creation_matrix(f, Side::right, 1);
  Index e2 = f.index_of(Word({2}));
  EXPECT_EQ(s1(f.index_of(Word({1, 2})), e2), cplx(1.0));
  EXPECT_EQ(r1(f.index_of(Word({2, 1})), e2), cplx(1.0));
}

TEST(Creation, RowSumIsComplementOfVacuum) {
  TruncatedFock f(3, 3);
  Mat sum = Mat::Zero(f.dim(), f.dim());
  for (int i = 1; i <= 3; ++i) {
    Mat s = creation_matrix(f, Side::left, i);
    sum += s * s.adjoint();
  }
  Mat expect = identity(f.dim());
  expect(0, 0) = 0.0;
  EXPECT_EQ((sum - expect).norm(), 0.0);
}

TEST(Flip, SwapsLeftAndRight) {
  TruncatedFock f(2, 3);
  Mat u = flip_unitary(f);
  EXPECT_EQ((u * u - identity(f.dim())).norm(), 0.0);
  EXPECT_EQ(u(0, 0), cplx(1.0));
  EXPECT_EQ(u(1, 1), cplx(1.0));
  Index a = f.index_of(Word({1, 2})), b = f.index_of(Word({2, 1}));
  EXPECT_EQ(u(b, a), cplx(1.0));
  for (int i = 1; i <= 2; ++i) {
    Mat lhs = u.adjoint() * creation_matrix(f, Side::left, i) * u;
    EXPECT_EQ((lhs - creation_matrix(f, Side::right, i)).norm(), 0.0);
  }
}

TEST(Creation, MatrixFreeMatchesDense) {
  std::mt19937_64 gen(1);
  TruncatedFock f(2, 3);
  const Index block = 3;
  Mat x = random_matrix(f.dim() * block, 4, gen);
  for (Side side : {Side::left, Side::right})
    for (int i = 1; i <= 2; ++i) {
      Mat c = kron(creation_matrix(f, side, i), identity(block));
      EXPECT_LE((apply_creation(f, side, i, x, block) - c * x).norm(), 1e-14);
      EXPECT_LE((apply_creation_adjoint(f, side, i, x, block) - c.adjoint() * x).norm(), 1e-14);
    }
  Word w{2, 1};
  Mat sw = kron(creation_matrix(f, Side::left, 2) * creation_matrix(f, Side::left, 1), identity(block));
  EXPECT_LE((apply_left_word(f, w, x, block) - sw * x).norm(), 1e-14);
  EXPECT_LE((apply_left_word_adjoint(f, w, x, block) - sw.adjoint() * x).norm(), 1e-14);
}
