#include <gtest/gtest.h>

#include <cmath>

#include "envmm/elliptic.hpp"
#include "envmm/errors.hpp"
#include "support/generators.hpp"

namespace envmm {
namespace {

using testing::Gen;

double flat_functional(int n_x, double q) {
  const DirichletGreen green(n_x, q);
  const std::vector<double> ones(green.interior(), 1.0);
  return green.inner(green.solve(ones), ones);
}

// ∫₀¹ z for −z'' + q z = 1 with zero boundary values.
double flat_exact(double q) {
  const double r = std::sqrt(q);
  return (1.0 - 2.0 * std::tanh(r / 2.0) / r) / q;
}

TEST(Tridiagonal, MatchesDenseSolve) {
  Gen g(1);
  for (int n : {1, 2, 7, 40}) {
    std::vector<double> lo(n), di(n), up(n), rhs(n);
    Matrix dense = Matrix::Zero(n, n);
    Vector b(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = g.uniform(-1.0, 1.0);
      up[i] = g.uniform(-1.0, 1.0);
      di[i] = 3.0 + g.uniform(0.0, 1.0);
      rhs[i] = b(i) = g.normal();
      dense(i, i) = di[i];
      if (i > 0) dense(i, i - 1) = lo[i];
      if (i + 1 < n) dense(i, i + 1) = up[i];
    }
    const std::vector<double> x = solve_tridiagonal(lo, di, up, rhs);
    const Vector ref = dense.partialPivLu().solve(b);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref(i), 1e-12);
  }
}

TEST(Tridiagonal, RejectsMismatchedBands) {
  EXPECT_THROW(solve_tridiagonal({0.0}, {1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}), ShapeMismatch);
}

TEST(DirichletGreen, FlatForcingWithoutPotentialHasClosedForm) {
  for (int n_x : {2, 3, 8, 32, 64, 128}) {
    const double h = 1.0 / n_x;
    EXPECT_NEAR(flat_functional(n_x, 0.0), 1.0 / 12.0 - h * h / 12.0, 1e-14);
  }
}

TEST(DirichletGreen, SecondOrderWithPotential) {
  const double q = 4.0;
  const double e1 = std::abs(flat_functional(32, q) - flat_exact(q));
  const double e2 = std::abs(flat_functional(64, q) - flat_exact(q));
  const double e3 = std::abs(flat_functional(128, q) - flat_exact(q));
  EXPECT_GT(std::log2(e1 / e2), 1.9);
  EXPECT_GT(std::log2(e2 / e3), 1.9);
}

TEST(DirichletGreen, OperatorIsSymmetric) {
  Gen g(2);
  const DirichletGreen green(50, 2.0);
  std::vector<double> f(green.interior()), k(green.interior());
  for (int i = 0; i < green.interior(); ++i) {
    f[i] = g.normal();
    k[i] = g.normal();
  }
  EXPECT_NEAR(green.inner(green.solve(f), k), green.inner(f, green.solve(k)), 1e-12);
}

TEST(DirichletGreen, Validation) {
  EXPECT_THROW(DirichletGreen(1, 0.0), BadConfig);
  EXPECT_THROW(DirichletGreen(10, -1.0), BadConfig);
}

TEST(Mollifier, UnitMassAndSupport) {
  const int n = 200000;
  const double width = 0.2, center = 0.5;
  double mass = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    mass += (i == 0 || i == n ? 0.5 : 1.0) * mollifier(x, center, width);
  }
  EXPECT_NEAR(mass / n, 1.0, 1e-9);
  EXPECT_EQ(mollifier(center + width, center, width), 0.0);
  EXPECT_EQ(mollifier(0.0, center, width), 0.0);
  EXPECT_GT(mollifier(center, center, width), 0.0);
}

TEST(EllipticRepresentation, DiagonalStructure) {
  EllipticConfig cfg;
  cfg.n_x = 64;
  cfg.bump_centers = {0.3, 0.6};
  cfg.alpha = {1.0, -0.5};
  cfg.phi_scales = {2.0, 1.0};
  cfg.time_basis = 3;
  const EllipticRepresentation e = build_elliptic_representation(cfg);
  ASSERT_EQ(e.provenance.green_responses.size(), 2u);
  const RepresentationOperator& s = e.op;
  EXPECT_EQ(s.p_out(), 3);
  EXPECT_EQ(s.q(), 3);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(s.s1()(k, vec_index(0, k, 3)), e.provenance.green_responses[0]);
    EXPECT_EQ(s.s1()(k, vec_index(1, k, 3)), e.provenance.green_responses[1]);
    EXPECT_EQ(s.s2()(k, vec_index(0, k, 3)), 2.0);
    EXPECT_EQ(s.s2()(k, vec_index(1, k, 3)), -0.5);
  }
  EXPECT_EQ(s.s1().cwiseAbs().sum(), 3 * (std::abs(e.provenance.green_responses[0]) +
                                          std::abs(e.provenance.green_responses[1])));
  // A positive bump produces a positive response of a positive observable.
  EXPECT_GT(e.provenance.green_responses[0], 0.0);
}

TEST(EllipticRepresentation, ResponseApproachesContinuousGreenFunction) {
  // For q = 0 and ℓ ≡ 1, ⟨G g, 1⟩ = ∫ g(y) y(1−y)/2 dy, which is c(1−c)/2 − w²·κ for a
  // symmetric bump; the difference between two centres cancels κ.
  EllipticConfig cfg;
  cfg.n_x = 512;
  cfg.bump_width = 0.05;
  cfg.bump_centers = {0.25, 0.5};
  cfg.alpha = {1.0, 1.0};
  const auto r = build_elliptic_representation(cfg).provenance.green_responses;
  const double expected = 0.5 * (0.25 * 0.75) - 0.5 * (0.5 * 0.5);
  EXPECT_NEAR(r[0] - r[1], expected, 1e-5);
}

TEST(EllipticRepresentation, RejectsBadConfig) {
  EllipticConfig cfg;
  cfg.bump_centers = {0.05};
  cfg.alpha = {1.0};
  EXPECT_THROW(build_elliptic_representation(cfg), BadConfig);
  cfg.bump_centers = {0.5};
  cfg.alpha = {};
  EXPECT_THROW(build_elliptic_representation(cfg), BadConfig);
  cfg.alpha = {1.0};
  cfg.bump_width = 0.0;
  EXPECT_THROW(build_elliptic_representation(cfg), BadConfig);
  cfg.bump_width = 0.1;
  cfg.observable = {1.0, 2.0};
  EXPECT_THROW(build_elliptic_representation(cfg), BadConfig);
}

}  // namespace
}  // namespace envmm
