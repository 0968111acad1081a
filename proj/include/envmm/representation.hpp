#pragma once

// The fixed linear map from (source + baseline) coefficients to the observed
// target/auxiliary pair, and its finite truncations.

#include <optional>
#include <vector>

#include "envmm/measure_ensemble.hpp"
#include "envmm/types.hpp"

namespace envmm {

class RepresentationOperator {
 public:
  /// `s1` is p_out × (d·p). `s2` is q × (d·p) and already includes the
  /// embedding J; `j_norm` records ‖J‖ for the continuity constant.
  RepresentationOperator(int d, int p, Matrix s1, Matrix s2, double j_norm = 1.0);

  int d() const { return d_; }
  int p() const { return p_; }
  int dim() const { return d_ * p_; }
  int p_out() const { return static_cast<int>(s1_.rows()); }
  int q() const { return static_cast<int>(s2_.rows()); }
  const Matrix& s1() const { return s1_; }
  const Matrix& s2() const { return s2_; }
  double j_norm() const { return j_norm_; }

  /// [S1; S2], (p_out + q) × (d·p).
  Matrix stacked() const;

  /// Operator norm of the stacked map, σ_max([S1; S2]). Bounds σ_max(S1) and σ_max(S2).
  double norm() const { return norm_; }
  double s1_norm() const { return s1_norm_; }
  double s2_norm() const { return s2_norm_; }

 private:
  int d_;
  int p_;
  Matrix s1_;
  Matrix s2_;
  double j_norm_;
  double norm_;
  double s1_norm_;
  double s2_norm_;
};

/// Observed pairs per atom: row j of Y (m × p_out) and of X (m × q).
struct ObservedEnsemble {
  MeasureSpace space;
  Matrix Y;
  Matrix X;
};

struct ObservedMoments {
  Matrix Kyy;
  Matrix Kyx;
  Matrix Kxx;
  Matrix Kxy() const { return Kyx.transpose(); }
};

/// Y_j = S1 vec(a_j + ξ_j), X_j = S2 vec(a_j + ξ_j); ξ treated as 0 when absent.
ObservedEnsemble apply(const RepresentationOperator& s, const SourceEnsemble& a,
                       const std::optional<SourceEnsemble>& xi = std::nullopt);

ObservedMoments observed_second_moments(const ObservedEnsemble& o);

struct TruncatedRepresentation {
  int d = 0;
  int p = 0;
  int n_in = 0;
  int n_out = 0;
  Matrix B;  // (2·n_out) × (d·n_in): truncated S1 rows, then truncated S2 rows

  /// Parent column of input coordinate c (component-major over coeff < n_in).
  int parent_column(int c) const { return (c / n_in) * p + (c % n_in); }
};

/// Throws BadTruncation unless 1 ≤ n_in ≤ p and 1 ≤ n_out ≤ min(p_out, q).
TruncatedRepresentation truncate(const RepresentationOperator& s, int n_in, int n_out);

/// Coordinates H_n(v) of a stacked vector on the retained inputs.
Vector restrict_input(const TruncatedRepresentation& t, const Vector& v);

struct TruncationResidual {
  std::vector<double> per_atom;  // ‖δ_n‖ per atom
  double aggregate = 0.0;        // Σ_j μ_j ‖δ_n,j‖²
};

/// δ_n = P_n(S̃(a+ξ)) − B·H_n(a+ξ), per atom.
TruncationResidual truncation_residual(const RepresentationOperator& s,
                                       const TruncatedRepresentation& t, const SourceEnsemble& a,
                                       const std::optional<SourceEnsemble>& xi = std::nullopt);

}  // namespace envmm
