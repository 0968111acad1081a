#pragma once

// Finite measure spaces and coefficient ensembles over them.
//
// An ensemble stores, for every atom j, the d×p block of coefficients of the
// source against fixed orthonormal bases. Blocks are flattened component-major
// into row j of an m × (d·p) matrix; that layout is shared by every module.

#include <optional>
#include <span>
#include <vector>

#include "envmm/covariance.hpp"
#include "envmm/types.hpp"

namespace envmm {

/// Finite atom set with strictly positive weights. Total mass is arbitrary.
class MeasureSpace {
 public:
  explicit MeasureSpace(std::vector<double> weights);

  int atom_count() const { return static_cast<int>(weights_.size()); }
  std::span<const double> weights() const { return weights_; }
  double weight(int atom) const { return weights_[atom]; }
  double total_mass() const;

  /// Product measure (this × other); atom (j, l) maps to index j·|other| + l.
  MeasureSpace product(const MeasureSpace& other) const;

  bool operator==(const MeasureSpace&) const = default;

 private:
  std::vector<double> weights_;
};

class SourceEnsemble {
 public:
  /// `values` is m × (d·p); row j is vec(a_j).
  SourceEnsemble(MeasureSpace space, int d, int p, Matrix values);

  static SourceEnsemble zeros(MeasureSpace space, int d, int p);

  const MeasureSpace& space() const { return space_; }
  int d() const { return d_; }
  int p() const { return p_; }
  int dim() const { return d_ * p_; }
  int atom_count() const { return space_.atom_count(); }
  const Matrix& values() const { return values_; }

  double coefficient(int atom, int component, int coeff) const {
    return values_(atom, vec_index(component, coeff, p_));
  }

  SourceEnsemble scaled(double c) const;

  /// Weighted L²(μ) norm: sqrt(Σ_j μ_j ‖a_j‖²).
  double norm() const;

 private:
  MeasureSpace space_;
  int d_;
  int p_;
  Matrix values_;
};

/// Atom-wise sum; both ensembles must live on the same space with equal (d, p).
SourceEnsemble operator+(const SourceEnsemble& a, const SourceEnsemble& b);
SourceEnsemble operator-(const SourceEnsemble& a, const SourceEnsemble& b);

/// Distance ‖A1 − A2‖ in the weighted ensemble norm. Same space required.
double ensemble_distance(const SourceEnsemble& a, const SourceEnsemble& b);

/// Prescribed baseline second moment Σ_ξ.
class BaselineSpec {
 public:
  /// Throws DegenerateSpec unless sigma is symmetric (1e-12 relative) and
  /// λ_min ≥ −1e-10·λ_max.
  BaselineSpec(int d, int p, Matrix sigma_xi);

  static BaselineSpec zero(int d, int p);

  int d() const { return d_; }
  int p() const { return p_; }
  int dim() const { return d_ * p_; }
  const Matrix& sigma() const { return sigma_; }

 private:
  int d_;
  int p_;
  Matrix sigma_;
};

/// Baseline values on some measure space together with the spec they target.
struct BaselineEnsemble {
  SourceEnsemble values;
  BaselineSpec spec;
};

BlockCovariance second_moment(const SourceEnsemble& e);
inline BlockCovariance second_moment(const BaselineEnsemble& x) { return second_moment(x.values); }

/// Σ_j μ_j vec(a_j) vec(ξ_j)ᵀ. Throws ShapeMismatch on differing spaces or shapes.
Matrix cross_moment(const SourceEnsemble& a, const SourceEnsemble& x);
inline Matrix cross_moment(const SourceEnsemble& a, const BaselineEnsemble& x) {
  return cross_moment(a, x.values);
}

struct ValidationReport {
  double second_moment_error = 0.0;  // ‖Σ_ξ(realized) − Σ_ξ‖_F
  double cross_moment_norm = 0.0;    // ‖cross_moment(A, ξ)‖_F
  double tol = 0.0;
  bool passed = false;
};

ValidationReport validate_baseline(const SourceEnsemble& a, const BaselineEnsemble& x,
                                   const BaselineSpec& spec, double tol);

}  // namespace envmm
