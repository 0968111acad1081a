#include <gtest/gtest.h>

#include "envmm/covariance.hpp"
#include "envmm/errors.hpp"
#include "support/generators.hpp"

namespace envmm {
namespace {

using testing::Gen;

TEST(BlockCovariance, ValidatesSymmetryAndSign) {
  Matrix m = Matrix::Identity(4, 4);
  m(0, 3) = 1e-3;
  EXPECT_THROW(BlockCovariance(2, 2, m), InvalidInput);
  Matrix neg = Matrix::Identity(4, 4);
  neg(2, 2) = -1e-3;
  EXPECT_THROW(BlockCovariance(2, 2, neg), InvalidInput);
  EXPECT_THROW(BlockCovariance(2, 3, Matrix::Identity(4, 4)), ShapeMismatch);
  // Rounding-level negativity is tolerated.
  Matrix tiny = Matrix::Identity(4, 4);
  tiny(3, 3) = -1e-14;
  EXPECT_NO_THROW(BlockCovariance(2, 2, tiny));
}

TEST(BlockCovariance, BlockAccess) {
  Matrix m = Matrix::Zero(6, 6);
  m(3, 4) = m(4, 3) = 7.0;
  m(0, 5) = m(5, 0) = 2.0;
  const BlockCovariance s(2, 3, m + 20.0 * Matrix::Identity(6, 6));
  EXPECT_EQ(s.block(1, 1)(0, 1), 7.0);
  EXPECT_EQ(s.block(0, 1)(0, 2), 2.0);
  EXPECT_EQ(s.block(1, 0)(2, 0), 2.0);
}

TEST(Loewner, ScaledCopyIsDominated) {
  Gen g(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = g.integer(1, 8);
    const BlockCovariance s(1, n, g.psd(n, g.integer(1, n)));
    const double c = g.uniform(0.0, 1.0);
    const BlockCovariance small(1, n, c * s.matrix());
    EXPECT_TRUE(loewner_dominates(s, small).dominates);
    EXPECT_TRUE(loewner_dominates(s, s).dominates);
  }
}

TEST(Loewner, DetectsViolation) {
  Matrix a = Matrix::Identity(2, 2);
  Matrix b = Matrix::Identity(2, 2);
  b(1, 1) = 1.5;
  const Domination d = loewner_dominates(BlockCovariance(1, 2, a), BlockCovariance(1, 2, b));
  EXPECT_FALSE(d.dominates);
  EXPECT_NEAR(d.lambda_min, -0.5, 1e-14);
}

TEST(Compress, ZeroesTrailingCoefficientsInEveryComponent) {
  Gen g(2);
  const BlockCovariance s(2, 3, g.psd(6, 6));
  const BlockCovariance c = compress(s, 2);
  for (int r = 0; r < 6; ++r) {
    for (int k = 0; k < 6; ++k) {
      const bool kept = (r % 3) < 2 && (k % 3) < 2;
      EXPECT_EQ(c.matrix()(r, k), kept ? s.matrix()(r, k) : 0.0);
    }
  }
  EXPECT_THROW(compress(s, 0), BadTruncation);
  EXPECT_THROW(compress(s, 4), BadTruncation);
  EXPECT_EQ(compress(s, 3).matrix(), s.matrix());
}

TEST(Compress, PreservesDomination) {
  Gen g(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = g.integer(2, 6);
    const Matrix small = g.psd(2 * p, 3);
    const BlockCovariance sa(2, p, small + g.psd(2 * p, 2));
    const BlockCovariance sap(2, p, small);
    const int n = g.integer(1, p);
    EXPECT_TRUE(loewner_dominates(compress(sa, n), compress(sap, n)).dominates);
  }
}

TEST(PushForward, PreservesDomination) {
  Gen g(4);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = g.integer(1, 8);
    const Matrix small = g.psd(n, g.integer(1, n));
    const BlockCovariance sa(1, n, small + g.psd(n, g.integer(1, n)));
    const BlockCovariance sap(1, n, small);
    const Matrix l = g.gaussian(g.integer(1, 6), n);
    const BlockCovariance pa = push_forward(l, sa);
    EXPECT_EQ(pa.d(), 1);
    EXPECT_EQ(pa.p(), l.rows());
    EXPECT_TRUE(loewner_dominates(pa, push_forward(l, sap)).dominates);
  }
}

TEST(DenseSubset, AgreesWithEigenTestWhenSpanning) {
  Gen g(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4;
    const BlockCovariance sa(1, n, g.psd(n, n));
    const BlockCovariance sap(1, n, g.psd(n, n, 0.6));
    std::vector<Vector> tests;
    for (int i = 0; i < 400; ++i) tests.push_back(g.gaussian_vector(n));
    const DenseSubsetReport r = dense_subset_check(sa, sap, tests, 1e-9);
    EXPECT_TRUE(r.spans_space);
    EXPECT_EQ(r.rank, n);
    // The quadratic-form check can only miss violations, never invent them.
    if (loewner_dominates(sa, sap).dominates) {
      EXPECT_TRUE(r.passed);
    }
    if (!r.passed) {
      EXPECT_FALSE(loewner_dominates(sa, sap).dominates);
    }
  }
}

TEST(DenseSubset, ReportsRankDeficientTestSet) {
  const BlockCovariance sa(1, 3, Matrix::Identity(3, 3));
  Matrix big = Matrix::Identity(3, 3);
  big(2, 2) = 5.0;
  const BlockCovariance sap(1, 3, big);
  Vector e0 = Vector::Unit(3, 0);
  Vector e1 = Vector::Unit(3, 1);
  const DenseSubsetReport r = dense_subset_check(sa, sap, {e0, e1, e0 + e1}, 1e-12);
  EXPECT_TRUE(r.passed);
  EXPECT_FALSE(r.spans_space);
  EXPECT_EQ(r.rank, 2);
}

TEST(QuadraticForm, Value) {
  Matrix m(2, 2);
  m << 2, 1, 1, 3;
  Vector v(2);
  v << 1, -1;
  EXPECT_DOUBLE_EQ(quadratic_form(BlockCovariance(1, 2, m), v), 3.0);
}

}  // namespace
}  // namespace envmm
