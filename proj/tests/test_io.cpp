#include <gtest/gtest.h>

#include <sstream>

#include "envmm/errors.hpp"
#include "envmm/io.hpp"
#include "support/generators.hpp"

namespace envmm {
namespace {

using testing::Gen;

TEST(IoCsv, EnsembleRoundTripIsExact) {
  Gen g(1);
  const SourceEnsemble a = g.ensemble(7, 2, 3);
  std::stringstream ss;
  io::write_ensemble_csv(ss, a);
  const SourceEnsemble b = io::read_ensemble_csv(ss);
  EXPECT_EQ(b.values(), a.values());
  EXPECT_EQ(b.space(), a.space());
  EXPECT_EQ(b.d(), 2);
  EXPECT_EQ(b.p(), 3);
}

TEST(IoCsv, EnsembleRejectsMissingCell) {
  std::stringstream ss("atom,weight,component,coeff_index,value\n0,1,0,0,1.5\n0,1,0,1,2\n1,1,0,0,3\n");
  EXPECT_THROW(io::read_ensemble_csv(ss), InvalidInput);
}

TEST(IoCsv, EnsembleRejectsBadNumber) {
  std::stringstream ss("atom,weight,component,coeff_index,value\n0,1,0,0,abc\n");
  EXPECT_THROW(io::read_ensemble_csv(ss), InvalidInput);
}

TEST(IoCsv, MatrixFormsRoundTrip) {
  Gen g(2);
  const BlockCovariance s(2, 2, g.psd(4, 4));
  std::stringstream ss;
  io::write_blockcov_csv(ss, s);
  const BlockCovariance s2 = io::read_blockcov_csv(ss);
  EXPECT_EQ(s2.matrix(), s.matrix());
  EXPECT_EQ(s2.d(), 2);

  const HSOperator t = g.op(3, 2);
  std::stringstream st;
  io::write_hsop_csv(st, t);
  EXPECT_EQ(io::read_hsop_csv(st).lambda(), t.lambda());

  const Matrix m = g.gaussian(2, 5);
  std::stringstream sm;
  io::write_matrix_csv(sm, m);
  EXPECT_EQ(io::read_matrix_csv(sm), m);
}

TEST(IoCsv, SequenceRoundTrip) {
  Gen g(3);
  const CovarianceSequence seq = g.ma_sequence(2, 3);
  std::stringstream ss;
  io::write_sequence_csv(ss, seq);
  const CovarianceSequence back = io::read_sequence_csv(ss);
  ASSERT_EQ(back.max_lag(), 3);
  for (int t = 0; t <= 3; ++t) EXPECT_EQ(back.at(t), seq.at(t));
}

TEST(IoCsv, SpectralAndSeriesHeaders) {
  Gen g(4);
  const SpectralDensity s = spectral_density(g.ma_sequence(2, 1), 4);
  std::stringstream ss;
  io::write_spectral_csv(ss, s);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "freq_index,i,j,re,im");
  int rows = 0;
  for (std::string line; std::getline(ss, line);) ++rows;
  EXPECT_EQ(rows, 4 * 2 * 2);

  std::stringstream sv;
  io::write_complex_series_csv(sv, ComplexVector::Ones(3));
  std::getline(sv, header);
  EXPECT_EQ(header, "freq_index,re,im");
}

TEST(IoCsv, MissingFileNamesPath) {
  try {
    io::load_ensemble("/nonexistent/dir/ens.csv");
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/ens.csv"), std::string::npos);
  }
}

}  // namespace
}  // namespace envmm
