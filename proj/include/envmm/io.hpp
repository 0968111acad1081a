#pragma once

// Plain-text CSV formats. Indices in every format are 0-based.
//
//   ensemble         header `atom,weight,component,coeff_index,value`
//   block covariance `# blockcov d=<d> p=<p>` then dense rows
//   HS operator      `# hsop p_out=<p_out> q=<q>` then dense rows
//   dense matrix     `# matrix rows=<r> cols=<c>` then dense rows
//   covariance seq   header `lag,i,j,value`, lags τ ≥ 0 only
//   spectral density header `freq_index,i,j,re,im`
//   complex series   header `freq_index,re,im`

#include <iosfwd>
#include <string>

#include "envmm/cost_minimizer.hpp"
#include "envmm/covariance.hpp"
#include "envmm/measure_ensemble.hpp"
#include "envmm/stationary.hpp"

namespace envmm::io {

void write_ensemble_csv(std::ostream& out, const SourceEnsemble& e);
/// Every (atom, component, coeff) cell must appear exactly once; d and p are
/// one past the largest indices seen.
SourceEnsemble read_ensemble_csv(std::istream& in);

void write_blockcov_csv(std::ostream& out, const BlockCovariance& s);
BlockCovariance read_blockcov_csv(std::istream& in);

void write_hsop_csv(std::ostream& out, const HSOperator& t);
HSOperator read_hsop_csv(std::istream& in);

void write_matrix_csv(std::ostream& out, const Matrix& m);
Matrix read_matrix_csv(std::istream& in);

void write_sequence_csv(std::ostream& out, const CovarianceSequence& seq);
CovarianceSequence read_sequence_csv(std::istream& in);

void write_spectral_csv(std::ostream& out, const SpectralDensity& s);
void write_complex_series_csv(std::ostream& out, const ComplexVector& v);

/// Convenience wrappers; throw InvalidInput naming the path on IO failure.
SourceEnsemble load_ensemble(const std::string& path);
CovarianceSequence load_sequence(const std::string& path);
Matrix load_matrix(const std::string& path);

}  // namespace envmm::io
