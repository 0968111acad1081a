#include "envmm/elliptic.hpp"

#include <cmath>
#include <string>

#include "envmm/errors.hpp"

namespace envmm {

namespace {

// ∫_{-1}^{1} exp(−1/(1 − s²)) ds
constexpr double kBumpMass = 0.4439938161680793;

}  // namespace

std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      std::vector<double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw ShapeMismatch("tridiagonal bands and right-hand side must have equal length");
  }
  if (n == 0) return rhs;
  std::vector<double> c(n, 0.0);
  double denom = diag[0];
  if (denom == 0.0) throw InvalidInput("zero pivot in tridiagonal solve");
  c[0] = upper[0] / denom;
  rhs[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - lower[i] * c[i - 1];
    if (denom == 0.0) throw InvalidInput("zero pivot in tridiagonal solve");
    c[i] = upper[i] / denom;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

DirichletGreen::DirichletGreen(int n_x, double potential) : n_x_(n_x), potential_(potential) {
  if (n_x < 2) throw BadConfig("grid needs n_x >= 2 intervals, got " + std::to_string(n_x));
  if (!(potential >= 0.0)) throw BadConfig("potential q must be >= 0");
}

std::vector<double> DirichletGreen::solve(const std::vector<double>& f) const {
  const int n = interior();
  if (static_cast<int>(f.size()) != n) {
    throw ShapeMismatch("forcing has " + std::to_string(f.size()) + " values, grid has " +
                        std::to_string(n) + " interior nodes");
  }
  const double inv_h2 = 1.0 / (h() * h());
  std::vector<double> lower(n, -inv_h2), upper(n, -inv_h2), diag(n, 2.0 * inv_h2 + potential_);
  return solve_tridiagonal(lower, diag, upper, f);
}

double DirichletGreen::inner(const std::vector<double>& z, const std::vector<double>& ell) const {
  if (z.size() != ell.size() || static_cast<int>(z.size()) != interior()) {
    throw ShapeMismatch("inner product needs interior-node vectors");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) acc += z[i] * ell[i];
  return h() * acc;
}

double mollifier(double x, double center, double width) {
  const double s = (x - center) / width;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s)) / (kBumpMass * width);
}

EllipticRepresentation build_elliptic_representation(const EllipticConfig& cfg) {
  if (cfg.n_x < 2) throw BadConfig("n_x must be >= 2");
  if (!(cfg.bump_width > 0.0)) throw BadConfig("bump_width must be positive");
  if (cfg.time_basis < 1) throw BadConfig("time_basis must be >= 1");
  const int d = static_cast<int>(cfg.bump_centers.size());
  if (d < 1) throw BadConfig("bump_centers must list one centre per component");
  if (static_cast<int>(cfg.alpha.size()) != d) throw BadConfig("alpha needs one weight per component");
  if (!cfg.phi_scales.empty() && static_cast<int>(cfg.phi_scales.size()) != d) {
    throw BadConfig("phi_scales needs one scale per component");
  }
  for (double c : cfg.bump_centers) {
    if (!(c > cfg.bump_width && c < 1.0 - cfg.bump_width)) {
      throw BadConfig("bump centre " + std::to_string(c) + " must be farther than the width from the boundary");
    }
  }

  const DirichletGreen green(cfg.n_x, cfg.potential);
  std::vector<double> ell = cfg.observable;
  if (ell.empty()) ell.assign(green.interior(), 1.0);
  if (static_cast<int>(ell.size()) != green.interior()) {
    throw BadConfig("observable needs " + std::to_string(green.interior()) + " interior values");
  }

  EllipticProvenance prov;
  prov.n_x = cfg.n_x;
  prov.h = green.h();
  for (int j = 0; j < d; ++j) {
    std::vector<double> profile(green.interior());
    for (int i = 0; i < green.interior(); ++i) {
      profile[i] = mollifier(green.node(i), cfg.bump_centers[j], cfg.bump_width);
    }
    prov.green_responses.push_back(green.inner(green.solve(profile), ell));
  }

  const int p = cfg.time_basis;
  Matrix s1 = Matrix::Zero(p, d * p);
  Matrix s2 = Matrix::Zero(p, d * p);
  for (int j = 0; j < d; ++j) {
    const double phi = cfg.phi_scales.empty() ? 1.0 : cfg.phi_scales[j];
    for (int k = 0; k < p; ++k) {
      s1(k, vec_index(j, k, p)) = prov.green_responses[j];
      s2(k, vec_index(j, k, p)) = cfg.alpha[j] * phi;
    }
  }
  RepresentationOperator op(d, p, std::move(s1), std::move(s2));
  prov.s1_norm = op.s1_norm();
  prov.s2_norm = op.s2_norm();
  return {std::move(op), std::move(prov)};
}

}  // namespace envmm
