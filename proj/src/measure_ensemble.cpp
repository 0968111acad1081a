#include "envmm/measure_ensemble.hpp"

#include <cmath>
#include <string>

#include "envmm/errors.hpp"
#include "envmm/kernels.hpp"

namespace envmm {

MeasureSpace::MeasureSpace(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidInput("measure space needs at least one atom");
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    if (!(weights_[j] > 0.0) || !std::isfinite(weights_[j])) {
      throw InvalidInput("weight of atom " + std::to_string(j) + " must be positive and finite");
    }
  }
}

double MeasureSpace::total_mass() const {
  double total = 0.0;
  for (double w : weights_) total += w;
  return total;
}

MeasureSpace MeasureSpace::product(const MeasureSpace& other) const {
  std::vector<double> w;
  w.reserve(weights_.size() * other.weights_.size());
  for (double a : weights_) {
    for (double b : other.weights_) w.push_back(a * b);
  }
  return MeasureSpace(std::move(w));
}

SourceEnsemble::SourceEnsemble(MeasureSpace space, int d, int p, Matrix values)
    : space_(std::move(space)), d_(d), p_(p), values_(std::move(values)) {
  if (d < 1 || p < 1) throw InvalidInput("ensemble needs d, p >= 1");
  if (values_.rows() != space_.atom_count() || values_.cols() != d * p) {
    throw ShapeMismatch("values are " + std::to_string(values_.rows()) + "x" +
                        std::to_string(values_.cols()) + ", expected " +
                        std::to_string(space_.atom_count()) + "x" + std::to_string(d * p));
  }
  if (!values_.allFinite()) throw InvalidInput("ensemble has non-finite coefficients");
}

SourceEnsemble SourceEnsemble::zeros(MeasureSpace space, int d, int p) {
  const int m = space.atom_count();
  return SourceEnsemble(std::move(space), d, p, Matrix::Zero(m, d * p));
}

SourceEnsemble SourceEnsemble::scaled(double c) const {
  return SourceEnsemble(space_, d_, p_, c * values_);
}

double SourceEnsemble::norm() const {
  double total = 0.0;
  for (int j = 0; j < atom_count(); ++j) total += space_.weight(j) * values_.row(j).squaredNorm();
  return std::sqrt(total);
}

namespace {

void check_compatible(const SourceEnsemble& a, const SourceEnsemble& b) {
  if (a.d() != b.d() || a.p() != b.p()) {
    throw ShapeMismatch("(d,p) = (" + std::to_string(a.d()) + "," + std::to_string(a.p()) +
                        ") vs (" + std::to_string(b.d()) + "," + std::to_string(b.p()) + ")");
  }
  if (!(a.space() == b.space())) throw ShapeMismatch("ensembles live on different measure spaces");
}

}  // namespace

SourceEnsemble operator+(const SourceEnsemble& a, const SourceEnsemble& b) {
  check_compatible(a, b);
  return SourceEnsemble(a.space(), a.d(), a.p(), a.values() + b.values());
}

SourceEnsemble operator-(const SourceEnsemble& a, const SourceEnsemble& b) {
  check_compatible(a, b);
  return SourceEnsemble(a.space(), a.d(), a.p(), a.values() - b.values());
}

double ensemble_distance(const SourceEnsemble& a, const SourceEnsemble& b) {
  return (a - b).norm();
}

BaselineSpec::BaselineSpec(int d, int p, Matrix sigma_xi) : d_(d), p_(p), sigma_(std::move(sigma_xi)) {
  if (d < 1 || p < 1) throw DegenerateSpec("baseline needs d, p >= 1");
  if (sigma_.rows() != d * p || sigma_.cols() != d * p) {
    throw ShapeMismatch("baseline covariance is " + std::to_string(sigma_.rows()) + "x" +
                        std::to_string(sigma_.cols()) + ", expected dim " + std::to_string(d * p));
  }
  if (!sigma_.allFinite()) throw DegenerateSpec("baseline covariance has non-finite entries");
  const double scale = std::max(1.0, sigma_.cwiseAbs().maxCoeff());
  if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw DegenerateSpec("baseline covariance is not symmetric");
  }
  sigma_ = 0.5 * (sigma_ + sigma_.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma_, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  const double lmax = es.eigenvalues()(es.eigenvalues().size() - 1);
  if (lmin < -kPsdTol * std::max(lmax, 0.0)) {
    throw DegenerateSpec("baseline covariance has negative eigenvalue " + std::to_string(lmin));
  }
}

BaselineSpec BaselineSpec::zero(int d, int p) { return BaselineSpec(d, p, Matrix::Zero(d * p, d * p)); }

BlockCovariance second_moment(const SourceEnsemble& e) {
  Matrix m = kernels::parallel::weighted_gram(e.values(), e.values(), e.space().weights());
  return BlockCovariance::from_gram(e.d(), e.p(), std::move(m));
}

Matrix cross_moment(const SourceEnsemble& a, const SourceEnsemble& x) {
  check_compatible(a, x);
  return kernels::parallel::weighted_gram(a.values(), x.values(), a.space().weights());
}

ValidationReport validate_baseline(const SourceEnsemble& a, const BaselineEnsemble& x,
                                   const BaselineSpec& spec, double tol) {
  if (spec.d() != x.values.d() || spec.p() != x.values.p()) {
    throw ShapeMismatch("baseline spec and ensemble disagree on (d,p)");
  }
  ValidationReport report;
  report.tol = tol;
  report.second_moment_error = (second_moment(x.values).matrix() - spec.sigma()).norm();
  report.cross_moment_norm = cross_moment(a, x.values).norm();
  report.passed = report.second_moment_error <= tol && report.cross_moment_norm <= tol;
  return report;
}

}  // namespace envmm
