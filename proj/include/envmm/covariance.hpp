#pragma once

#include <vector>

#include "envmm/types.hpp"

namespace envmm {

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kDefaultDominationTol = 1e-9;

/// Symmetric PSD second-moment operator on R^{d·p} with its block layout.
class BlockCovariance {
 public:
  /// Validates symmetry (kSymmetryTol relative) and
  /// λ_min ≥ −kPsdTol·max(1, λ_max); throws InvalidInput otherwise.
  /// The stored matrix is the exact symmetric part of `matrix`.
  BlockCovariance(int d, int p, Matrix matrix);

  /// Builds from a product that is symmetric PSD in exact arithmetic
  /// (weighted Gram, L S Lᵀ). Symmetrizes without the PSD eigen check.
  static BlockCovariance from_gram(int d, int p, Matrix matrix);

  int d() const { return d_; }
  int p() const { return p_; }
  int dim() const { return d_ * p_; }
  const Matrix& matrix() const { return matrix_; }

  /// Block Σ_ij (p×p) between components i and j.
  Matrix block(int i, int j) const { return matrix_.block(i * p_, j * p_, p_, p_); }

 private:
  BlockCovariance(int d, int p, Matrix matrix, bool check_psd);

  int d_;
  int p_;
  Matrix matrix_;
};

struct Domination {
  bool dominates = false;
  double lambda_min = 0.0;  // λ_min(big − small)
};

/// Loewner test big ⪰ small via a symmetric eigensolve of the difference.
Domination loewner_dominates(const BlockCovariance& big, const BlockCovariance& small,
                             double tol = kDefaultDominationTol);

double quadratic_form(const BlockCovariance& s, const Vector& g);

/// P_N Σ P_N: zero every row/column whose coefficient index is ≥ n (0-based),
/// in every component. Throws BadTruncation unless 1 ≤ n ≤ p.
BlockCovariance compress(const BlockCovariance& s, int n);

/// L S Lᵀ. The result carries block layout (1, r).
BlockCovariance push_forward(const Matrix& L, const BlockCovariance& s);

struct DenseSubsetReport {
  bool passed = false;
  int rank = 0;              // numerical rank of the test vectors
  bool spans_space = false;  // rank == dim: only then is `passed` equivalent to domination
  double worst_excess = 0.0; // max_g q(SAp, g) − q(SA, g)
};

/// q(sap, g) ≤ q(sa, g) + tol for every g in `tests`.
DenseSubsetReport dense_subset_check(const BlockCovariance& sa, const BlockCovariance& sap,
                                     const std::vector<Vector>& tests, double tol);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& symmetric);

}  // namespace envmm
