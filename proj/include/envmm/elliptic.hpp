#pragma once

// Dirichlet problem −z'' + q z = f on [0, 1], second-order finite differences,
// and the representation operator of the moving-bump elliptic system.

#include <string>
#include <vector>

#include "envmm/representation.hpp"

namespace envmm {

/// Thomas algorithm for a tridiagonal system. `lower[i]` multiplies x[i-1],
/// `upper[i]` multiplies x[i+1]; lower[0] and upper[n-1] are ignored.
std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      std::vector<double> rhs);

/// Finite-difference Green operator on n_x uniform intervals of [0, 1].
/// Acts on the n_x − 1 interior node values.
class DirichletGreen {
 public:
  DirichletGreen(int n_x, double potential);

  int intervals() const { return n_x_; }
  int interior() const { return n_x_ - 1; }
  double h() const { return 1.0 / n_x_; }
  /// Interior node x_i = (i + 1)·h.
  double node(int i) const { return (i + 1) * h(); }

  std::vector<double> solve(const std::vector<double>& f) const;

  /// ⟨z, ℓ⟩ by the trapezoid rule (boundary values vanish).
  double inner(const std::vector<double>& z, const std::vector<double>& ell) const;

 private:
  int n_x_;
  double potential_;
};

/// Smooth unit-mass bump of half-width `width` centred at `center`.
double mollifier(double x, double center, double width);

struct EllipticConfig {
  int n_x = 64;
  double potential = 0.0;
  double bump_width = 0.1;
  std::vector<double> bump_centers;    // one per component (d = size)
  std::vector<double> observable;      // ℓ at interior nodes; empty means ℓ ≡ 1
  int time_basis = 4;                  // p
  std::vector<double> alpha;           // aggregation weights, one per component
  std::vector<double> phi_scales;      // Φ_j = phi_scales[j]·identity; empty means 1
};

struct EllipticProvenance {
  int n_x = 0;
  double h = 0.0;
  std::vector<double> green_responses;  // c_j = ⟨G g_j, ℓ⟩
  double s1_norm = 0.0;
  double s2_norm = 0.0;
};

struct EllipticRepresentation {
  RepresentationOperator op;
  EllipticProvenance provenance;
};

/// Throws BadConfig on non-positive grid or width, misplaced centres, or
/// inconsistent lengths.
EllipticRepresentation build_elliptic_representation(const EllipticConfig& cfg);

}  // namespace envmm
