#pragma once

// Quadratic cost R(T) = Σ_j μ_j ‖Y_j − Λ X_j‖², its source/baseline split,
// and minimizers of the normal equation Λ M = B.

#include <variant>
#include <vector>

#include "envmm/measure_ensemble.hpp"
#include "envmm/representation.hpp"
#include "envmm/types.hpp"

namespace envmm {

inline constexpr double kDefaultRankTol = 1e-12;
inline constexpr double kDefaultConsistencyTol = 1e-8;

/// Coefficient matrix λ (p_out × q) of a Hilbert–Schmidt operator; the
/// Hilbert–Schmidt norm is its Frobenius norm.
class HSOperator {
 public:
  explicit HSOperator(Matrix lambda);
  static HSOperator zero(int p_out, int q) { return HSOperator(Matrix::Zero(p_out, q)); }

  const Matrix& lambda() const { return lambda_; }
  int p_out() const { return static_cast<int>(lambda_.rows()); }
  int q() const { return static_cast<int>(lambda_.cols()); }
  double hs_norm() const { return lambda_.norm(); }

 private:
  Matrix lambda_;
};

struct NormalEquationSystem {
  Matrix M;          // q × q Gram matrix of X
  Matrix B;          // p_out × q cross matrix Σ μ Y Xᵀ
  double c_A = 0.0;  // Σ μ ‖Y‖²
};

double cost(const ObservedEnsemble& o, const HSOperator& t);

/// c_A − 2⟨Λ, B⟩_F + tr(Λ M Λᵀ).
double cost_from_system(const NormalEquationSystem& sys, const HSOperator& t);

struct CostDecomposition {
  double h_A = 0.0;   // tr(W Σ_A Wᵀ)
  double r_xi = 0.0;  // tr(W Σ_ξ Wᵀ)
  double total = 0.0;
};

/// W = S1 − Λ S2; splits the cost into its source and baseline parts.
CostDecomposition cost_decomposed(const SourceEnsemble& a, const BaselineSpec& spec,
                                  const RepresentationOperator& s, const HSOperator& t);

/// Same split from an already computed source second moment.
CostDecomposition cost_decomposed(const BlockCovariance& sigma_a, const BaselineSpec& spec,
                                  const RepresentationOperator& s, const HSOperator& t);

NormalEquationSystem assemble_normal_equations(const ObservedEnsemble& o);

struct MinimizerReport {
  double residual_norm = 0.0;      // ‖Λ M − B‖_F
  double coercivity_margin = 0.0;  // λ_min(M)
  int kernel_dim = 0;
  bool unique = false;
  double norm_bound = 0.0;         // ‖B‖_F / c_min for the coercive solve, else 0
};

struct Minimizer {
  HSOperator op;
  MinimizerReport report;
};

/// Typed outcome: some row of B leaves ran(M), the infimum is not attained.
struct NoMinimizer {
  double range_violation = 0.0;  // ‖B (I − M M†)‖_F
  double tolerance = 0.0;
};

using MinimizerOutcome = std::variant<Minimizer, NoMinimizer>;

/// Symmetric eigendecomposition of M shared by all solves.
class GramFactorization {
 public:
  GramFactorization(const Matrix& M, double rank_tol = kDefaultRankTol);

  const Vector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  double lambda_min() const { return eigenvalues_.size() ? eigenvalues_(0) : 0.0; }
  double lambda_max() const { return eigenvalues_.size() ? eigenvalues_(eigenvalues_.size() - 1) : 0.0; }
  /// Eigenvalues at or below rank_tol·λ_max are treated as kernel.
  double cutoff() const { return cutoff_; }
  int rank() const { return rank_; }

  Matrix pseudoinverse() const;
  std::vector<Vector> kernel_basis() const;

 private:
  Vector eigenvalues_;
  Matrix eigenvectors_;
  double cutoff_;
  int rank_;
};

/// Λ* = B M⁻¹. Throws NotCoercive if λ_min(M) < c_min.
Minimizer solve_coercive(const NormalEquationSystem& sys, double c_min);

/// Minimal-Frobenius-norm Λ* = B M†, or NoMinimizer when
/// ‖B (I − M M†)‖_F > consistency_tol·(1 + ‖B‖_F).
MinimizerOutcome solve_pseudoinverse(const NormalEquationSystem& sys,
                                     double rank_tol = kDefaultRankTol,
                                     double consistency_tol = kDefaultConsistencyTol);

struct SolutionSet {
  Minimizer minimal;               // T0
  std::vector<Vector> kernel_basis;  // spans ker(M); minimizers are T0 + rows from this span
  bool unique = false;
};

using SolutionSetOutcome = std::variant<SolutionSet, NoMinimizer>;

SolutionSetOutcome solution_set(const NormalEquationSystem& sys, double rank_tol = kDefaultRankTol,
                                double consistency_tol = kDefaultConsistencyTol);

/// (2+√2)·‖S‖²·max(1,‖J‖²)·max(1,‖T‖²_HS)·‖A1 − A2‖·(‖A1‖ + ‖A2‖), with ‖S‖ the
/// operator norm of the stacked representation.
double cost_difference_bound(const SourceEnsemble& a1, const SourceEnsemble& a2,
                             const RepresentationOperator& s, const HSOperator& t);

}  // namespace envmm
