#include "generators.hpp"

#include <complex>
#include <numbers>

namespace envmm::testing {

Matrix Gen::gaussian(int rows, int cols, double scale) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = scale * normal();
  }
  return m;
}

SourceEnsemble Gen::ensemble(int m, int d, int p) {
  auto w = weights(m);
  return SourceEnsemble(MeasureSpace(std::move(w)), d, p, gaussian(m, d * p));
}

RepresentationOperator Gen::representation(int d, int p, int p_out, int q) {
  Matrix s1 = gaussian(p_out, d * p);
  Matrix s2 = gaussian(q, d * p);
  return RepresentationOperator(d, p, std::move(s1), std::move(s2));
}

Matrix Gen::psd(int n, int rank, double scale) {
  const Matrix g = gaussian(n, rank, scale);
  Matrix s = g * g.transpose();
  return 0.5 * (s + s.transpose());
}

CovarianceSequence Gen::ma_sequence(int d, int L, double scale) {
  std::vector<Matrix> taps;
  for (int k = 0; k <= L; ++k) taps.push_back(gaussian(d, d, scale));
  return ma_covariance(taps);
}

CovarianceSequence ma_covariance(const std::vector<Matrix>& taps) {
  const int L = static_cast<int>(taps.size()) - 1;
  const int d = static_cast<int>(taps[0].rows());
  std::vector<Matrix> lags;
  for (int tau = 0; tau <= L; ++tau) {
    Matrix k = Matrix::Zero(d, d);
    for (int j = 0; j + tau <= L; ++j) k += taps[j + tau] * taps[j].transpose();
    if (tau == 0) k = 0.5 * (k + k.transpose());
    lags.push_back(k);
  }
  return CovarianceSequence(d, std::move(lags));
}

Matrix brute_second_moment(const SourceEnsemble& a) {
  const int n = a.dim();
  Matrix s = Matrix::Zero(n, n);
  for (int j = 0; j < a.atom_count(); ++j) {
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) s(r, c) += a.space().weight(j) * a.values()(j, r) * a.values()(j, c);
    }
  }
  return s;
}

double brute_cost(const RepresentationOperator& s, const SourceEnsemble& a, const SourceEnsemble* xi,
                  const HSOperator& t) {
  double total = 0.0;
  for (int j = 0; j < a.atom_count(); ++j) {
    Vector v = a.values().row(j).transpose();
    if (xi) v += xi->values().row(j).transpose();
    const Vector y = s.s1() * v;
    const Vector x = s.s2() * v;
    total += a.space().weight(j) * (y - t.lambda() * x).squaredNorm();
  }
  return total;
}

ComplexMatrix brute_spectrum(const CovarianceSequence& seq, int r, int n) {
  const double omega = 2.0 * std::numbers::pi * r / n;
  ComplexMatrix k = ComplexMatrix::Zero(seq.d(), seq.d());
  for (int tau = -seq.max_lag(); tau <= seq.max_lag(); ++tau) {
    k += seq.at(tau).cast<Complex>() * std::polar(1.0, -omega * tau);
  }
  return k;
}

}  // namespace envmm::testing
