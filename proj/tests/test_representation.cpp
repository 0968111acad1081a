#include <gtest/gtest.h>

#include <limits>

#include "envmm/cost_minimizer.hpp"
#include "envmm/errors.hpp"
#include "envmm/representation.hpp"
#include "support/generators.hpp"

namespace envmm {
namespace {

using testing::Gen;

TEST(Representation, NormIsStackedOperatorNorm) {
  Gen g(1);
  const RepresentationOperator s = g.representation(2, 3, 4, 2);
  Eigen::JacobiSVD<Matrix> svd(s.stacked());
  EXPECT_NEAR(s.norm(), svd.singularValues()(0), 1e-12);
  EXPECT_GE(s.norm() + 1e-12, s.s1_norm());
  EXPECT_GE(s.norm() + 1e-12, s.s2_norm());
}

TEST(Representation, ApplyMatchesPerAtomProducts) {
  Gen g(2);
  const SourceEnsemble a = g.ensemble(40, 2, 3);
  const SourceEnsemble xi = g.ensemble(40, 2, 3);
  const SourceEnsemble x2(a.space(), 2, 3, xi.values());
  const RepresentationOperator s = g.representation(2, 3, 3, 5);
  const ObservedEnsemble o = apply(s, a, x2);
  for (int j = 0; j < a.atom_count(); ++j) {
    const Vector v = (a.values().row(j) + x2.values().row(j)).transpose();
    EXPECT_LE((o.Y.row(j).transpose() - s.s1() * v).norm(), 1e-12);
    EXPECT_LE((o.X.row(j).transpose() - s.s2() * v).norm(), 1e-12);
  }
}

TEST(Representation, ObservedMomentsArePushForwards) {
  Gen g(3);
  const SourceEnsemble a = g.ensemble(25, 1, 4);
  const RepresentationOperator s = g.representation(1, 4, 2, 3);
  const ObservedMoments k = observed_second_moments(apply(s, a));
  const Matrix sa = testing::brute_second_moment(a);
  EXPECT_LE((k.Kyy - s.s1() * sa * s.s1().transpose()).norm(), 1e-10);
  EXPECT_LE((k.Kyx - s.s1() * sa * s.s2().transpose()).norm(), 1e-10);
  EXPECT_LE((k.Kxx - s.s2() * sa * s.s2().transpose()).norm(), 1e-10);
  EXPECT_EQ(k.Kxy(), k.Kyx.transpose());
}

TEST(Truncation, RejectsOutOfRange) {
  Gen g(4);
  const RepresentationOperator s = g.representation(2, 3, 4, 2);
  EXPECT_THROW(truncate(s, 0, 1), BadTruncation);
  EXPECT_THROW(truncate(s, 4, 1), BadTruncation);
  EXPECT_THROW(truncate(s, 2, 3), BadTruncation);
  EXPECT_NO_THROW(truncate(s, 3, 2));
}

TEST(Truncation, ColumnsMapToParents) {
  Gen g(5);
  const RepresentationOperator s = g.representation(3, 4, 2, 2);
  const TruncatedRepresentation t = truncate(s, 2, 2);
  EXPECT_EQ(t.parent_column(0), 0);
  EXPECT_EQ(t.parent_column(1), 1);
  EXPECT_EQ(t.parent_column(2), 4);
  EXPECT_EQ(t.parent_column(5), 9);
  EXPECT_EQ(t.B(0, 2), s.s1()(0, 4));
  EXPECT_EQ(t.B(3, 5), s.s2()(1, 9));
}

TEST(Truncation, ResidualVanishesAtFullInput) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Gen g(seed);
    const int d = g.integer(1, 3), p = g.integer(1, 6);
    const RepresentationOperator s = g.representation(d, p, g.integer(1, 4), g.integer(1, 4));
    const SourceEnsemble a = g.ensemble(g.integer(1, 20), d, p);
    const TruncationResidual r = truncation_residual(s, truncate(s, p, std::min(s.p_out(), s.q())), a);
    EXPECT_EQ(r.aggregate, 0.0);
  }
}

TEST(Truncation, ResidualIsTheDroppedColumnsContribution) {
  Gen g(6);
  const RepresentationOperator s = g.representation(2, 4, 3, 3);
  const SourceEnsemble a = g.ensemble(10, 2, 4);
  const TruncationResidual r = truncation_residual(s, truncate(s, 2, 3), a);
  double ref = 0.0;
  for (int j = 0; j < a.atom_count(); ++j) {
    Vector v = a.values().row(j).transpose();
    for (int c = 0; c < v.size(); ++c) {
      if (c % 4 >= 2) continue;
      v(c) = 0.0;
    }
    ref += a.space().weight(j) * (s.stacked() * v).squaredNorm();
  }
  EXPECT_NEAR(r.aggregate, ref, 1e-10 * (1.0 + ref));
}

// With mutually orthogonal input columns the residual is a sum of disjoint
// energies, so it decreases as more coefficients are kept.
TEST(Truncation, MonotoneForOrthogonalColumns) {
  Gen g(7);
  const int p = 5;
  Eigen::HouseholderQR<Matrix> qr(g.gaussian(2 * p, p));
  const Matrix q = qr.householderQ() * Matrix::Identity(2 * p, p);
  const RepresentationOperator s(1, p, q.topRows(p), q.bottomRows(p));
  const SourceEnsemble a = g.ensemble(30, 1, p);
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= p; ++n) {
    const double agg = truncation_residual(s, truncate(s, n, p), a).aggregate;
    EXPECT_LE(agg, prev + 1e-12);
    prev = agg;
  }
  EXPECT_EQ(prev, 0.0);
}

// Keeping a coefficient can increase the residual when its column cancels a
// dropped one: columns c1 = e, c2 = −e and input (0, 1, 1) give δ_1 = 0 but δ_2 = −e.
TEST(Truncation, NotMonotoneUnderCancellation) {
  Matrix s1(1, 3), s2(1, 3);
  s1 << 1.0, 1.0, -1.0;
  s2 << 0.0, 0.0, 0.0;
  const RepresentationOperator s(1, 3, s1, s2);
  Matrix v(1, 3);
  v << 0.0, 1.0, 1.0;
  const SourceEnsemble a(MeasureSpace({1.0}), 1, 3, v);
  const double r1 = truncation_residual(s, truncate(s, 1, 1), a).aggregate;
  const double r2 = truncation_residual(s, truncate(s, 2, 1), a).aggregate;
  EXPECT_EQ(r1, 0.0);
  EXPECT_EQ(r2, 1.0);
}

}  // namespace
}  // namespace envmm
