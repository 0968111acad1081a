#include "envmm/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "envmm/errors.hpp"

namespace envmm {

namespace {

void check_square(const Matrix& m, int dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw ShapeMismatch(std::string(what) + " is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + ", expected " + std::to_string(dim) +
                        "x" + std::to_string(dim));
  }
}

}  // namespace

double min_eigenvalue(const Matrix& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

BlockCovariance::BlockCovariance(int d, int p, Matrix matrix)
    : BlockCovariance(d, p, std::move(matrix), true) {}

BlockCovariance BlockCovariance::from_gram(int d, int p, Matrix matrix) {
  return BlockCovariance(d, p, std::move(matrix), false);
}

BlockCovariance::BlockCovariance(int d, int p, Matrix matrix, bool check_psd)
    : d_(d), p_(p) {
  if (d < 1 || p < 1) throw InvalidInput("block layout needs d, p >= 1");
  check_square(matrix, d * p, "covariance");
  if (!matrix.allFinite()) throw InvalidInput("covariance has non-finite entries");
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale) {
    throw InvalidInput("covariance not symmetric (max asymmetry " + std::to_string(asym) + ")");
  }
  matrix_ = 0.5 * (matrix + matrix.transpose());
  if (check_psd) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    const double lmax = es.eigenvalues()(es.eigenvalues().size() - 1);
    if (lmin < -kPsdTol * std::max(1.0, lmax)) {
      throw InvalidInput("covariance not PSD (lambda_min " + std::to_string(lmin) + ")");
    }
  }
}

Domination loewner_dominates(const BlockCovariance& big, const BlockCovariance& small,
                             double tol) {
  if (big.dim() != small.dim()) {
    throw ShapeMismatch("dimensions " + std::to_string(big.dim()) + " vs " +
                        std::to_string(small.dim()));
  }
  const double lmin = min_eigenvalue(big.matrix() - small.matrix());
  return {lmin >= -tol, lmin};
}

double quadratic_form(const BlockCovariance& s, const Vector& g) {
  if (g.size() != s.dim()) {
    throw ShapeMismatch("test vector has " + std::to_string(g.size()) + " entries, expected " +
                        std::to_string(s.dim()));
  }
  return g.dot(s.matrix() * g);
}

BlockCovariance compress(const BlockCovariance& s, int n) {
  if (n < 1 || n > s.p()) {
    throw BadTruncation("N=" + std::to_string(n) + " outside [1, " + std::to_string(s.p()) + "]");
  }
  Matrix out = s.matrix();
  for (int i = 0; i < s.d(); ++i) {
    for (int k = n; k < s.p(); ++k) {
      const int idx = vec_index(i, k, s.p());
      out.row(idx).setZero();
      out.col(idx).setZero();
    }
  }
  return BlockCovariance::from_gram(s.d(), s.p(), std::move(out));
}

BlockCovariance push_forward(const Matrix& L, const BlockCovariance& s) {
  if (L.cols() != s.dim()) {
    throw ShapeMismatch("map has " + std::to_string(L.cols()) + " columns, covariance dim " +
                        std::to_string(s.dim()));
  }
  if (L.rows() < 1) throw ShapeMismatch("map has no rows");
  Matrix out = L * s.matrix() * L.transpose();
  return BlockCovariance::from_gram(1, static_cast<int>(L.rows()), std::move(out));
}

DenseSubsetReport dense_subset_check(const BlockCovariance& sa, const BlockCovariance& sap,
                                     const std::vector<Vector>& tests, double tol) {
  if (sa.dim() != sap.dim()) throw ShapeMismatch("covariance dimensions differ");
  DenseSubsetReport report;
  report.passed = true;
  report.worst_excess = -std::numeric_limits<double>::infinity();
  Matrix G(sa.dim(), static_cast<Eigen::Index>(tests.size()));
  for (std::size_t t = 0; t < tests.size(); ++t) {
    const double excess = quadratic_form(sap, tests[t]) - quadratic_form(sa, tests[t]);
    report.worst_excess = std::max(report.worst_excess, excess);
    if (excess > tol) report.passed = false;
    G.col(static_cast<Eigen::Index>(t)) = tests[t];
  }
  if (tests.empty()) {
    report.worst_excess = 0.0;
  } else {
    Eigen::ColPivHouseholderQR<Matrix> qr(G);
    report.rank = static_cast<int>(qr.rank());
  }
  report.spans_space = report.rank == sa.dim();
  return report;
}

}  // namespace envmm
