#include "envmm/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "envmm/errors.hpp"
#include "envmm/kernels.hpp"

namespace envmm {

Domination is_member(const SourceEnsemble& ap, const SourceEnsemble& a, double tol) {
  if (ap.d() != a.d() || ap.p() != a.p()) throw ShapeMismatch("candidate and reference (d,p) differ");
  return loewner_dominates(second_moment(a), second_moment(ap), tol);
}

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> eigen_of(const SourceEnsemble& a) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(second_moment(a).matrix());
}

SourceEnsemble contract(const SourceEnsemble& a, const Matrix& U, const Vector& diag) {
  if (diag.size() != a.dim()) throw ShapeMismatch("contraction diagonal has wrong length");
  if ((diag.array() == 1.0).all()) return a;
  const Matrix K = U * diag.asDiagonal() * U.transpose();
  return SourceEnsemble(a.space(), a.d(), a.p(), kernels::parallel::apply_rows(a.values(), K));
}

}  // namespace

SourceEnsemble contract_on_eigenbasis(const SourceEnsemble& a, const Vector& diag) {
  return contract(a, eigen_of(a).eigenvectors(), diag);
}

std::vector<SourceEnsemble> sample_dominated(const SourceEnsemble& a, std::uint64_t seed,
                                             int n_samples, double shrink_floor) {
  if (n_samples < 0) throw InvalidInput("sample count must be >= 0");
  if (!(shrink_floor >= 0.0 && shrink_floor <= 1.0)) throw InvalidInput("shrink_floor must lie in [0, 1]");
  const Matrix U = eigen_of(a).eigenvectors();

  // Draw every diagonal up front so the stream does not depend on scheduling.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(shrink_floor, 1.0);
  std::vector<Vector> diags(n_samples, Vector(a.dim()));
  for (auto& dg : diags) {
    for (Eigen::Index i = 0; i < dg.size(); ++i) dg(i) = shrink_floor == 1.0 ? 1.0 : unif(rng);
  }

  std::vector<SourceEnsemble> out;
  out.reserve(n_samples);
  for (const auto& dg : diags) out.push_back(contract(a, U, dg));
  return out;
}

FittedBaseline fit_baseline(const SourceEnsemble& a, const BaselineSpec& spec, std::uint64_t seed) {
  if (spec.d() != a.d() || spec.p() != a.p()) throw ShapeMismatch("baseline spec (d,p) does not match source");
  Eigen::SelfAdjointEigenSolver<Matrix> es(spec.sigma());
  const Vector& sig = es.eigenvalues();
  const double smax = std::max(sig(sig.size() - 1), 0.0);
  if (sig(0) < -kPsdTol * smax) {
    throw DegenerateSpec("baseline covariance has negative eigenvalue " + std::to_string(sig(0)));
  }

  std::vector<int> kept;
  for (Eigen::Index i = 0; i < sig.size(); ++i) {
    if (smax > 0.0 && sig(i) > kDefaultRankTol * smax) kept.push_back(static_cast<int>(i));
  }
  const int r = static_cast<int>(kept.size());
  if (r == 0) {
    return {a, BaselineEnsemble{SourceEnsemble::zeros(a.space(), a.d(), a.p()), spec}};
  }

  // Σ_ξ = F Fᵀ with F = U_r √Λ_r; any F Q with Q orthogonal also factors it.
  Matrix F(a.dim(), r);
  for (int c = 0; c < r; ++c) F.col(c) = es.eigenvectors().col(kept[c]) * std::sqrt(sig(kept[c]));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix gauss(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) gauss(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(gauss);
  const Matrix Q = qr.householderQ();
  const Matrix G = F * Q;

  const double mass = a.space().total_mass();
  const MeasureSpace aux(std::vector<double>(2 * r, 1.0 / (2.0 * r)));
  const double amplitude = std::sqrt(static_cast<double>(r) / mass);
  MeasureSpace product = a.space().product(aux);

  const int m = a.atom_count();
  const int naux = 2 * r;
  Matrix lifted(m * naux, a.dim());
  Matrix xi(m * naux, a.dim());
  for (int j = 0; j < m; ++j) {
    for (int c = 0; c < r; ++c) {
      const Eigen::Index plus = static_cast<Eigen::Index>(j) * naux + 2 * c;
      lifted.row(plus) = a.values().row(j);
      lifted.row(plus + 1) = a.values().row(j);
      xi.row(plus) = amplitude * G.col(c).transpose();
      xi.row(plus + 1) = -amplitude * G.col(c).transpose();
    }
  }
  SourceEnsemble expanded(product, a.d(), a.p(), std::move(lifted));
  SourceEnsemble baseline(std::move(product), a.d(), a.p(), std::move(xi));
  return {std::move(expanded), BaselineEnsemble{std::move(baseline), spec}};
}

ExtremalCheck verify_extremal(const SourceEnsemble& a, const BaselineSpec& spec,
                                            const RepresentationOperator& s,
                                            const std::vector<HSOperator>& ts, std::uint64_t seed,
                                            int n_samples, double tol) {
  if (a.d() != s.d() || a.p() != s.p() || spec.dim() != s.dim()) {
    throw ShapeMismatch("source, baseline and representation dimensions differ");
  }
  std::vector<SourceEnsemble> samples{a};
  for (auto& smp : sample_dominated(a, seed, n_samples, 0.0)) samples.push_back(std::move(smp));

  const BlockCovariance sigma_a = second_moment(a);
  const int n = static_cast<int>(samples.size());
  std::vector<BlockCovariance> sigmas(n, sigma_a);
  std::vector<double> margins(n, 0.0);

#pragma omp parallel for schedule(static) num_threads(kernels::max_threads())
  for (int i = 0; i < n; ++i) {
    sigmas[i] = second_moment(samples[i]);
    margins[i] = loewner_dominates(sigma_a, sigmas[i]).lambda_min;
  }

  ExtremalCheck check;
  check.tol = tol;
  check.holds = true;
  for (const auto& t : ts) {
    EnvelopeReport rep;
    rep.cost_reference = cost_decomposed(sigma_a, spec, s, t).total;
    rep.cost_samples.resize(n);
#pragma omp parallel for schedule(static) num_threads(kernels::max_threads())
    for (int i = 0; i < n; ++i) {
      rep.cost_samples[i] = {i, cost_decomposed(sigmas[i], spec, s, t).total, margins[i]};
    }
    rep.member = true;
    rep.lambda_min_margin = std::numeric_limits<double>::infinity();
    rep.max_violation = -std::numeric_limits<double>::infinity();
    for (const auto& c : rep.cost_samples) {
      rep.member = rep.member && c.margin >= -kDefaultDominationTol;
      rep.lambda_min_margin = std::min(rep.lambda_min_margin, c.margin);
      rep.max_violation = std::max(rep.max_violation, c.cost - rep.cost_reference);
    }
    if (rep.max_violation > tol * (1.0 + std::abs(rep.cost_reference))) check.holds = false;
    check.reports.push_back(std::move(rep));
  }
  return check;
}

ClosureReport closure_regression(const SourceEnsemble& a_limit,
                                 const std::vector<SourceEnsemble>& approximants,
                                 const RepresentationOperator& s, const BaselineSpec& spec,
                                 const HSOperator& t, double tol) {
  ClosureReport rep;
  const double reference = cost_decomposed(a_limit, spec, s, t).total;
  for (const auto& an : approximants) {
    ClosureEntry e;
    e.distance = ensemble_distance(an, a_limit);
    e.gap = std::abs(cost_decomposed(an, spec, s, t).total - reference);
    e.bound = cost_difference_bound(an, a_limit, s, t);
    rep.entries.push_back(e);
  }
  rep.within_bound = std::all_of(rep.entries.begin(), rep.entries.end(),
                                 [tol](const ClosureEntry& e) { return e.gap <= e.bound + tol; });

  std::vector<std::size_t> order(rep.entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return rep.entries[x].distance > rep.entries[y].distance;
  });
  rep.monotone = true;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (rep.entries[order[i]].gap > rep.entries[order[i - 1]].gap + tol) rep.monotone = false;
  }
  return rep;
}

}  // namespace envmm
