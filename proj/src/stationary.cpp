#include "envmm/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "envmm/covariance.hpp"
#include "envmm/errors.hpp"
#include "envmm/kernels.hpp"
#include "envmm/measure_ensemble.hpp"
#include "envmm/representation.hpp"

namespace envmm {

namespace {

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

void check_grid(const ComplexVector& a, const ComplexVector& b, const char* what) {
  if (a.size() != b.size()) {
    throw ShapeMismatch(std::string(what) + ": grid sizes " + std::to_string(a.size()) + " and " +
                        std::to_string(b.size()));
  }
}

}  // namespace

CovarianceSequence::CovarianceSequence(int d, std::vector<Matrix> nonnegative_lags)
    : d_(d), lags_(std::move(nonnegative_lags)) {
  if (d < 1) throw InvalidInput("covariance sequence needs d >= 1");
  if (lags_.empty()) throw InvalidInput("covariance sequence needs at least lag 0");
  for (std::size_t t = 0; t < lags_.size(); ++t) {
    if (lags_[t].rows() != d || lags_[t].cols() != d) {
      throw ShapeMismatch("lag " + std::to_string(t) + " is not " + std::to_string(d) + "x" +
                          std::to_string(d));
    }
    if (!lags_[t].allFinite()) throw InvalidInput("lag " + std::to_string(t) + " has non-finite entries");
  }
  const double scale = std::max(1.0, lags_[0].cwiseAbs().maxCoeff());
  if ((lags_[0] - lags_[0].transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw InvalidInput("K[0] must be symmetric");
  }
  lags_[0] = 0.5 * (lags_[0] + lags_[0].transpose());
}

Matrix CovarianceSequence::at(int tau) const {
  const int L = max_lag();
  if (tau > L || tau < -L) return Matrix::Zero(d_, d_);
  return tau >= 0 ? lags_[tau] : Matrix(lags_[-tau].transpose());
}

SpectralDensity spectral_density(const CovarianceSequence& seq, int n_f) {
  const int L = seq.max_lag();
  if (n_f < 2 * L + 1) {
    throw BadGrid("grid of " + std::to_string(n_f) + " points cannot resolve lags up to " + std::to_string(L));
  }
  SpectralDensity out{seq.d(), std::vector<ComplexMatrix>(n_f)};
  std::vector<Matrix> lags;
  for (int tau = -L; tau <= L; ++tau) lags.push_back(seq.at(tau));

#pragma omp parallel for schedule(static) num_threads(kernels::max_threads())
  for (int r = 0; r < n_f; ++r) {
    ComplexMatrix acc = ComplexMatrix::Zero(seq.d(), seq.d());
    for (int tau = -L; tau <= L; ++tau) {
      // reduce τ·r mod n_f so the phase stays exact on the grid
      const long long idx = ((static_cast<long long>(tau) * r) % n_f + n_f) % n_f;
      acc += lags[tau + L].cast<Complex>() * unit_phase(-grid_frequency(static_cast<int>(idx), n_f));
    }
    out.values[r] = 0.5 * (acc + acc.adjoint());
  }
  return out;
}

WssEnvelopeResult wss_envelope_test(const SpectralDensity& sa, const SpectralDensity& sap, double tol) {
  if (sa.d != sap.d || sa.grid_size() != sap.grid_size()) {
    throw ShapeMismatch("spectral densities differ in dimension or grid");
  }
  const int n = sa.grid_size();
  WssEnvelopeResult res;
  res.lambda_min_per_frequency.resize(n);

#pragma omp parallel for schedule(static) num_threads(kernels::max_threads())
  for (int r = 0; r < n; ++r) {
    const ComplexMatrix diff = sa.values[r] - sap.values[r];
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(diff, Eigen::EigenvaluesOnly);
    res.lambda_min_per_frequency[r] = es.eigenvalues()(0);
  }

  const auto worst = std::min_element(res.lambda_min_per_frequency.begin(), res.lambda_min_per_frequency.end());
  res.worst_index = static_cast<int>(worst - res.lambda_min_per_frequency.begin());
  res.worst_frequency = grid_frequency(res.worst_index, n);
  res.lambda_min = *worst;
  res.passes = res.lambda_min >= -tol;
  return res;
}

ComplexVector frequency_response(const std::vector<double>& taps, int n) {
  if (n < 1) throw BadGrid("grid must have at least one point");
  ComplexVector out = ComplexVector::Zero(n);
  for (int r = 0; r < n; ++r) {
    for (std::size_t t = 0; t < taps.size(); ++t) {
      const long long idx = (static_cast<long long>(t) * r) % n;
      out(r) += taps[t] * unit_phase(-grid_frequency(static_cast<int>(idx), n));
    }
  }
  return out;
}

LTIModel LTIModel::from_impulse_responses(const std::vector<double>& h, const std::vector<double>& phi,
                                          int n) {
  return {frequency_response(h, n), frequency_response(phi, n)};
}

SpectralBlocks lti_blocks(const SpectralDensity& source, const LTIModel& model) {
  if (source.d != 2) throw WrongDimension("LTI blocks need a 2-variate source, got d=" + std::to_string(source.d));
  const int n = source.grid_size();
  if (model.H.size() != n || model.Phi.size() != n) throw ShapeMismatch("filter responses do not match the grid");
  SpectralBlocks out{ComplexVector(n), ComplexVector(n), ComplexVector(n)};
  for (int r = 0; r < n; ++r) {
    const ComplexMatrix& k = source.values[r];
    out.Syy(r) = std::norm(model.H(r)) * k(0, 0);
    out.Syx(r) = model.H(r) * std::conj(model.Phi(r)) * k(0, 1);
    out.Sxx(r) = std::norm(model.Phi(r)) * k(1, 1);
  }
  return out;
}

int WienerSymbol::flagged_count() const {
  return static_cast<int>(std::count(flagged.begin(), flagged.end(), true));
}

WienerSymbol wiener_symbol(const ComplexVector& syx, const ComplexVector& sxx, double rank_tol) {
  check_grid(syx, sxx, "wiener_symbol");
  double smax = 0.0;
  for (Eigen::Index r = 0; r < sxx.size(); ++r) {
    const Complex v = sxx(r);
    const double slack = 1e-10 * std::max(1.0, std::abs(v));
    if (std::abs(v.imag()) > slack || v.real() < -slack) {
      throw InvalidInput("Sxx must be real and nonnegative (frequency " + std::to_string(r) + ")");
    }
    smax = std::max(smax, v.real());
  }
  const double cutoff = rank_tol * smax;
  WienerSymbol out{ComplexVector::Zero(sxx.size()), std::vector<bool>(sxx.size(), false)};
  for (Eigen::Index r = 0; r < sxx.size(); ++r) {
    if (sxx(r).real() > cutoff) {
      out.tau(r) = syx(r) / sxx(r).real();
    } else {
      out.flagged[r] = true;
    }
  }
  return out;
}

SpectralBlocks add_baseline_spectrum(const SpectralBlocks& s, const SpectralBlocks& xi) {
  check_grid(s.Syy, xi.Syy, "add_baseline_spectrum");
  check_grid(s.Syx, xi.Syx, "add_baseline_spectrum");
  check_grid(s.Sxx, xi.Sxx, "add_baseline_spectrum");
  return {s.Syy + xi.Syy, s.Syx + xi.Syx, s.Sxx + xi.Sxx};
}

double spectral_cost(const SpectralBlocks& s, const ComplexVector& tau) {
  check_grid(s.Syy, tau, "spectral_cost");
  const int n = static_cast<int>(tau.size());
  double acc = 0.0;
  for (int r = 0; r < n; ++r) {
    acc += s.Syy(r).real() - 2.0 * (tau(r) * std::conj(s.Syx(r))).real() + std::norm(tau(r)) * s.Sxx(r).real();
  }
  return acc / n;
}

Matrix circulant_embedding(const CovarianceSequence& seq, int n) {
  const int L = seq.max_lag();
  if (n < 2 * L + 1) throw BadGrid("period " + std::to_string(n) + " too short for lag " + std::to_string(L));
  const int d = seq.d();
  Matrix out = Matrix::Zero(d * n, d * n);
  for (int tau = -L; tau <= L; ++tau) {
    const Matrix k = seq.at(tau);
    for (int t = 0; t < n; ++t) {
      const int s = ((t + tau) % n + n) % n;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) out(i * n + s, j * n + t) = k(i, j);
      }
    }
  }
  return out;
}

Matrix circulant_from_response(const ComplexVector& response) {
  const int n = static_cast<int>(response.size());
  if (n < 1) throw BadGrid("empty frequency response");
  std::vector<double> c(n);
  double scale = 0.0;
  double imag_max = 0.0;
  for (int tau = 0; tau < n; ++tau) {
    Complex acc = 0.0;
    for (int r = 0; r < n; ++r) {
      const long long idx = (static_cast<long long>(tau) * r) % n;
      acc += response(r) * unit_phase(grid_frequency(static_cast<int>(idx), n));
    }
    acc /= static_cast<double>(n);
    c[tau] = acc.real();
    scale = std::max(scale, std::abs(acc));
    imag_max = std::max(imag_max, std::abs(acc.imag()));
  }
  if (imag_max > 1e-10 * std::max(1.0, scale)) {
    throw InvalidInput("frequency response is not that of a real filter");
  }
  Matrix out(n, n);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) out(s, t) = c[((s - t) % n + n) % n];
  }
  return out;
}

namespace {

ComplexMatrix unitary_dft(int n) {
  ComplexMatrix F(n, n);
  for (int r = 0; r < n; ++r) {
    for (int t = 0; t < n; ++t) {
      const long long idx = (static_cast<long long>(r) * t) % n;
      F(r, t) = unit_phase(-grid_frequency(static_cast<int>(idx), n)) / std::sqrt(static_cast<double>(n));
    }
  }
  return F;
}

}  // namespace

ComplexVector circulant_symbol(const Matrix& lambda) {
  const int n = static_cast<int>(lambda.rows());
  if (lambda.cols() != n) throw ShapeMismatch("symbol extraction needs a square operator");
  const ComplexMatrix F = unitary_dft(n);
  return (F * lambda.cast<Complex>() * F.adjoint()).diagonal();
}

OracleReport circulant_oracle(const CovarianceSequence& seq, const LTIModel& model, int n,
                              std::uint64_t seed, double rank_tol) {
  if (seq.d() != 2) throw WrongDimension("oracle needs a 2-variate source, got d=" + std::to_string(seq.d()));
  if (n < 2 * seq.max_lag() + 2) {
    throw BadGrid("oracle period " + std::to_string(n) + " must be >= 2L+2 = " +
                  std::to_string(2 * seq.max_lag() + 2));
  }
  if (model.H.size() != n || model.Phi.size() != n) throw ShapeMismatch("filter responses do not match the period");

  OracleReport rep;
  rep.n = n;

  // Exact second-order ensemble: ± pairs along a rotated square-root factor.
  const Matrix embedding = circulant_embedding(seq, n);
  Eigen::SelfAdjointEigenSolver<Matrix> es(embedding);
  rep.embedding_min_eigenvalue = es.eigenvalues()(0);
  if (rep.embedding_min_eigenvalue < -1e-9) {
    throw EmbeddingNotPSD("circulant embedding has eigenvalue " + std::to_string(rep.embedding_min_eigenvalue) +
                          "; the sequence is not a valid covariance at period " + std::to_string(n) +
                          ", try a larger period");
  }
  const double emax = std::max(es.eigenvalues()(es.eigenvalues().size() - 1), 0.0);
  std::vector<int> modes;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    if (es.eigenvalues()(k) > kDefaultRankTol * emax) modes.push_back(static_cast<int>(k));
  }
  const int dim = 2 * n;
  const int r = static_cast<int>(modes.size());
  Matrix factor(dim, std::max(r, 1));
  factor.setZero();
  for (int c = 0; c < r; ++c) factor.col(c) = es.eigenvectors().col(modes[c]) * std::sqrt(es.eigenvalues()(modes[c]));
  if (r > 1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix gauss(r, r);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) gauss(i, j) = normal(rng);
    }
    Eigen::HouseholderQR<Matrix> qr(gauss);
    factor = factor * Matrix(qr.householderQ());
  }
  const int pairs = std::max(r, 1);
  const double w = 1.0 / (2.0 * pairs);
  const double amplitude = std::sqrt(static_cast<double>(pairs));
  Matrix values(2 * pairs, dim);
  for (int c = 0; c < pairs; ++c) {
    values.row(2 * c) = amplitude * factor.col(c).transpose();
    values.row(2 * c + 1) = -amplitude * factor.col(c).transpose();
  }
  const SourceEnsemble source(MeasureSpace(std::vector<double>(2 * pairs, w)), 2, n, std::move(values));

  Matrix s1 = Matrix::Zero(n, dim);
  Matrix s2 = Matrix::Zero(n, dim);
  s1.leftCols(n) = circulant_from_response(model.H);
  s2.rightCols(n) = circulant_from_response(model.Phi);
  const RepresentationOperator op(2, n, std::move(s1), std::move(s2));

  const NormalEquationSystem sys = assemble_normal_equations(apply(op, source));
  rep.time_energy = sys.c_A / n;

  const SpectralBlocks blocks = lti_blocks(spectral_density(seq, n), model);
  const WienerSymbol tau = wiener_symbol(blocks.Syx, blocks.Sxx, rank_tol);
  rep.tau = tau.tau;
  rep.flagged = tau.flagged;
  rep.flagged_count = tau.flagged_count();
  rep.spectral_energy = blocks.Syy.real().sum() / n;
  rep.parseval_rel_error = std::abs(rep.spectral_energy - rep.time_energy) / std::max(1e-300, std::abs(rep.time_energy));
  if (rep.time_energy == 0.0 && rep.spectral_energy == 0.0) rep.parseval_rel_error = 0.0;

  const auto outcome = solve_pseudoinverse(sys, rank_tol);
  if (std::holds_alternative<NoMinimizer>(outcome)) {
    rep.no_minimizer = true;
    rep.symbol = ComplexVector::Zero(n);
    rep.max_gap = (rep.symbol - rep.tau).cwiseAbs().maxCoeff();
    return rep;
  }
  const Minimizer& sol = std::get<Minimizer>(outcome);
  rep.kernel_dim = sol.report.kernel_dim;
  rep.unique = sol.report.unique;
  rep.residual_norm = sol.report.residual_norm;

  const ComplexMatrix F = unitary_dft(n);
  ComplexMatrix D = F * sol.op.lambda().cast<Complex>() * F.adjoint();
  rep.symbol = D.diagonal();
  D.diagonal().setZero();
  rep.offdiag_norm = D.norm();
  rep.max_gap = (rep.symbol - rep.tau).cwiseAbs().maxCoeff();
  return rep;
}

}  // namespace envmm
