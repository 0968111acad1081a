#pragma once

// Wide-sense-stationary specialization on a uniform frequency grid.
//
// Conventions: K[τ]_{ij} = E[A_i(t+τ) A_j(t)], so K[−τ] = K[τ]ᵀ, and
// K̂(ω) = Σ_τ K[τ] e^{−iωτ} on ω_r = 2πr/N_f. A circulant matrix with first
// column c has eigenvalue ĉ(ω_r) on the Fourier vector e^{iω_r s}/√N.

#include <cstdint>
#include <numbers>
#include <vector>

#include "envmm/cost_minimizer.hpp"
#include "envmm/types.hpp"

namespace envmm {

class CovarianceSequence {
 public:
  /// `nonnegative_lags[τ]` is K[τ] for τ = 0..L; negative lags follow from
  /// K[−τ] = K[τ]ᵀ. K[0] must be symmetric (1e-12 relative).
  CovarianceSequence(int d, std::vector<Matrix> nonnegative_lags);

  int d() const { return d_; }
  int max_lag() const { return static_cast<int>(lags_.size()) - 1; }
  /// K[τ]; zero for |τ| > L.
  Matrix at(int tau) const;

 private:
  int d_;
  std::vector<Matrix> lags_;
};

inline double grid_frequency(int r, int n_f) { return 2.0 * std::numbers::pi * r / n_f; }

struct SpectralDensity {
  int d = 0;
  std::vector<ComplexMatrix> values;  // one Hermitian d×d matrix per grid point

  int grid_size() const { return static_cast<int>(values.size()); }
  double frequency(int r) const { return grid_frequency(r, grid_size()); }
};

/// Throws BadGrid unless n_f ≥ 2L + 1.
SpectralDensity spectral_density(const CovarianceSequence& seq, int n_f);

struct WssEnvelopeResult {
  bool passes = false;
  int worst_index = 0;
  double worst_frequency = 0.0;
  double lambda_min = 0.0;                     // at the worst frequency
  std::vector<double> lambda_min_per_frequency;
};

/// λ_min(K̂_A(ω_r) − K̂_{A'}(ω_r)) ≥ −tol on every grid point.
WssEnvelopeResult wss_envelope_test(const SpectralDensity& sa, const SpectralDensity& sap, double tol);

struct LTIModel {
  ComplexVector H;    // frequency response of the target filter
  ComplexVector Phi;  // frequency response of the auxiliary filter

  /// Responses of finite real impulse responses h[t], φ[t] (t ≥ 0) on an n-point grid.
  static LTIModel from_impulse_responses(const std::vector<double>& h,
                                         const std::vector<double>& phi, int n);
};

/// Frequency response Σ_t taps[t] e^{−iω_r t}.
ComplexVector frequency_response(const std::vector<double>& taps, int n);

struct SpectralBlocks {
  ComplexVector Syy;
  ComplexVector Syx;
  ComplexVector Sxx;
};

/// Syy = |H|²K̂₁₁, Syx = H·conj(Φ)·K̂₁₂, Sxx = |Φ|²K̂₂₂ pointwise.
SpectralBlocks lti_blocks(const SpectralDensity& source, const LTIModel& model);

struct WienerSymbol {
  ComplexVector tau;
  std::vector<bool> flagged;  // Sxx at or below rank_tol·max Sxx; tau = 0 there
  int flagged_count() const;
};

WienerSymbol wiener_symbol(const ComplexVector& syx, const ComplexVector& sxx,
                           double rank_tol = kDefaultRankTol);

SpectralBlocks add_baseline_spectrum(const SpectralBlocks& s, const SpectralBlocks& xi);

/// Per-sample cost of the circulant filter with symbol τ:
/// (1/N) Σ_r [Syy − 2 Re(τ conj(Syx)) + |τ|² Sxx].
double spectral_cost(const SpectralBlocks& s, const ComplexVector& tau);

/// Period-n embedding of the source covariance, (d·n)×(d·n), component-major
/// (index i·n + t). Throws BadGrid unless n ≥ 2L + 1.
Matrix circulant_embedding(const CovarianceSequence& seq, int n);

/// Real circulant matrix whose eigenvalue on Fourier mode r is response[r].
/// Throws InvalidInput when the response is not that of a real filter.
Matrix circulant_from_response(const ComplexVector& response);

/// Diagonal of F Λ F* for the unitary DFT F: the symbol of a circulant Λ.
ComplexVector circulant_symbol(const Matrix& lambda);

struct OracleReport {
  int n = 0;
  double max_gap = 0.0;             // max_r |symbol(ω_r) − τ(ω_r)|
  int flagged_count = 0;            // frequencies flagged by wiener_symbol
  bool no_minimizer = false;        // the time-domain solve found no minimizer
  int kernel_dim = 0;               // dim ker M in the time domain
  bool unique = false;
  double residual_norm = 0.0;       // ‖Λ M − B‖_F of the time-domain solve
  double offdiag_norm = 0.0;        // ‖F Λ F* − diag‖_F, zero for a circulant Λ
  double embedding_min_eigenvalue = 0.0;
  double spectral_energy = 0.0;     // Σ_r Syy(ω_r) / N
  double time_energy = 0.0;         // c_A / N
  double parseval_rel_error = 0.0;
  ComplexVector tau;
  ComplexVector symbol;
  std::vector<bool> flagged;
};

/// Time-domain check of the Wiener symbol: synthesizes an exact second-order
/// ensemble for the circulant embedding, filters it, solves the normal
/// equations with the pseudoinverse, and compares the solution's symbol with
/// τ. Requires d = 2 and n ≥ 2L + 2. Throws EmbeddingNotPSD when the
/// embedding has an eigenvalue below −1e-9.
OracleReport circulant_oracle(const CovarianceSequence& seq, const LTIModel& model, int n,
                              std::uint64_t seed, double rank_tol = kDefaultRankTol);

}  // namespace envmm
