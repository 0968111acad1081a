#pragma once

// Stability-set membership, generators of dominated sources and baselines,
// and direct checks of the envelope extremal principle.

#include <cstdint>
#include <vector>

#include "envmm/cost_minimizer.hpp"
#include "envmm/measure_ensemble.hpp"
#include "envmm/representation.hpp"

namespace envmm {

/// A' ∈ C(A) iff Σ_A − Σ_{A'} ⪰ 0 (within tol). Spaces may differ.
Domination is_member(const SourceEnsemble& ap, const SourceEnsemble& a,
                     double tol = kDefaultDominationTol);

/// Draws dominated sources A'_j = K vec(a_j), K = U D Uᵀ on the eigenbasis of
/// Σ_A with D diagonal, entries uniform in [shrink_floor, 1]. When D = I the
/// sample is a copy of A.
std::vector<SourceEnsemble> sample_dominated(const SourceEnsemble& a, std::uint64_t seed,
                                             int n_samples, double shrink_floor);

/// The contraction K for a given diagonal D (exposed for tests).
SourceEnsemble contract_on_eigenbasis(const SourceEnsemble& a, const Vector& diag);

struct FittedBaseline {
  SourceEnsemble expanded_source;  // A lifted to the product space
  BaselineEnsemble xi;
};

/// Realizes ξ with second moment Σ_ξ and zero cross moment with A on
/// (original atoms) × (2r auxiliary atoms), r = rank Σ_ξ. The seed picks the
/// factor rotation, so different seeds give different realizations.
FittedBaseline fit_baseline(const SourceEnsemble& a, const BaselineSpec& spec, std::uint64_t seed);

struct SampleCost {
  int sample = 0;  // 0 is the reference source itself
  double cost = 0.0;
  double margin = 0.0;  // λ_min(Σ_A − Σ_{A'})
};

struct EnvelopeReport {
  bool member = false;             // every sample passed the membership test
  double lambda_min_margin = 0.0;  // smallest margin across samples
  double cost_reference = 0.0;     // R_A(T)
  std::vector<SampleCost> cost_samples;
  double max_violation = 0.0;      // max_s R_{A'_s}(T) − R_A(T)
};

struct ExtremalCheck {
  std::vector<EnvelopeReport> reports;  // one per operator, in input order
  double tol = 0.0;
  bool holds = false;  // every max_violation ≤ tol·(1 + R_A(T))
};

/// Sample 0 is A itself; samples 1..n are drawn by sample_dominated with
/// shrink floor 0.
ExtremalCheck verify_extremal(const SourceEnsemble& a, const BaselineSpec& spec,
                                            const RepresentationOperator& s,
                                            const std::vector<HSOperator>& ts, std::uint64_t seed,
                                            int n_samples, double tol);

struct ClosureEntry {
  double distance = 0.0;  // ‖A_n − A_limit‖
  double gap = 0.0;       // |R_{A_n}(T) − R_{A_limit}(T)|
  double bound = 0.0;     // cost_difference_bound(A_n, A_limit)
};

struct ClosureReport {
  std::vector<ClosureEntry> entries;  // in approximant order
  bool within_bound = false;
  bool monotone = false;  // gaps nonincreasing (within tol) as distance decreases
};

ClosureReport closure_regression(const SourceEnsemble& a_limit,
                                 const std::vector<SourceEnsemble>& approximants,
                                 const RepresentationOperator& s, const BaselineSpec& spec,
                                 const HSOperator& t, double tol);

}  // namespace envmm
