#include "envmm/cost_minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "envmm/errors.hpp"
#include "envmm/kernels.hpp"

namespace envmm {

HSOperator::HSOperator(Matrix lambda) : lambda_(std::move(lambda)) {
  if (!lambda_.allFinite()) throw InvalidInput("operator coefficients must be finite");
}

double cost(const ObservedEnsemble& o, const HSOperator& t) {
  return kernels::parallel::weighted_residual_energy(o.Y, o.X, t.lambda(), o.space.weights());
}

double cost_from_system(const NormalEquationSystem& sys, const HSOperator& t) {
  const Matrix& L = t.lambda();
  if (L.rows() != sys.B.rows() || L.cols() != sys.B.cols()) {
    throw ShapeMismatch("operator shape does not match the normal equations");
  }
  return sys.c_A - 2.0 * (L.array() * sys.B.array()).sum() + (L * sys.M * L.transpose()).trace();
}

CostDecomposition cost_decomposed(const BlockCovariance& sigma_a, const BaselineSpec& spec,
                                  const RepresentationOperator& s, const HSOperator& t) {
  if (sigma_a.dim() != s.dim() || spec.dim() != s.dim()) {
    throw ShapeMismatch("source, baseline and representation dimensions differ");
  }
  if (t.p_out() != s.p_out() || t.q() != s.q()) {
    throw ShapeMismatch("operator is " + std::to_string(t.p_out()) + "x" + std::to_string(t.q()) +
                        ", representation needs " + std::to_string(s.p_out()) + "x" +
                        std::to_string(s.q()));
  }
  const Matrix W = s.s1() - t.lambda() * s.s2();
  CostDecomposition out;
  out.h_A = (W * sigma_a.matrix() * W.transpose()).trace();
  out.r_xi = (W * spec.sigma() * W.transpose()).trace();
  out.total = out.h_A + out.r_xi;
  return out;
}

CostDecomposition cost_decomposed(const SourceEnsemble& a, const BaselineSpec& spec,
                                  const RepresentationOperator& s, const HSOperator& t) {
  if (a.d() != s.d() || a.p() != s.p()) throw ShapeMismatch("source (d,p) does not match the representation");
  return cost_decomposed(second_moment(a), spec, s, t);
}

NormalEquationSystem assemble_normal_equations(const ObservedEnsemble& o) {
  const auto w = o.space.weights();
  NormalEquationSystem sys;
  sys.M = kernels::parallel::weighted_gram(o.X, o.X, w);
  sys.M = 0.5 * (sys.M + sys.M.transpose());
  sys.B = kernels::parallel::weighted_gram(o.Y, o.X, w);
  sys.c_A = kernels::parallel::weighted_residual_energy(o.Y, o.X, Matrix::Zero(o.Y.cols(), o.X.cols()), w);
  return sys;
}

GramFactorization::GramFactorization(const Matrix& M, double rank_tol) {
  if (M.rows() != M.cols()) throw ShapeMismatch("Gram matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(M);
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
  cutoff_ = rank_tol * std::max(lambda_max(), 0.0);
  rank_ = static_cast<int>((eigenvalues_.array() > cutoff_).count());
}

Matrix GramFactorization::pseudoinverse() const {
  Vector inv = Vector::Zero(eigenvalues_.size());
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
    if (eigenvalues_(i) > cutoff_) inv(i) = 1.0 / eigenvalues_(i);
  }
  return eigenvectors_ * inv.asDiagonal() * eigenvectors_.transpose();
}

std::vector<Vector> GramFactorization::kernel_basis() const {
  std::vector<Vector> basis;
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
    if (eigenvalues_(i) <= cutoff_) basis.emplace_back(eigenvectors_.col(i));
  }
  return basis;
}

namespace {

void check_system(const NormalEquationSystem& sys) {
  if (sys.M.rows() != sys.M.cols() || sys.B.cols() != sys.M.rows()) {
    throw ShapeMismatch("normal equations need square M and B with q columns");
  }
}

MinimizerReport report_for(const NormalEquationSystem& sys, const GramFactorization& f,
                           const Matrix& lambda) {
  MinimizerReport r;
  r.residual_norm = (lambda * sys.M - sys.B).norm();
  r.coercivity_margin = f.lambda_min();
  r.kernel_dim = static_cast<int>(f.eigenvalues().size()) - f.rank();
  r.unique = r.kernel_dim == 0;
  return r;
}

}  // namespace

Minimizer solve_coercive(const NormalEquationSystem& sys, double c_min) {
  check_system(sys);
  if (!(c_min > 0.0)) throw InvalidInput("coercivity constant must be positive");
  const GramFactorization f(sys.M, 0.0);
  if (f.lambda_min() < c_min) {
    throw NotCoercive("lambda_min(M) = " + std::to_string(f.lambda_min()) + " < c_min = " +
                      std::to_string(c_min));
  }
  const Vector inv = f.eigenvalues().cwiseInverse();
  Matrix lambda = sys.B * f.eigenvectors() * inv.asDiagonal() * f.eigenvectors().transpose();
  MinimizerReport r = report_for(sys, f, lambda);
  r.kernel_dim = 0;
  r.unique = true;
  r.norm_bound = sys.B.norm() / c_min;
  return {HSOperator(std::move(lambda)), r};
}

namespace {

std::variant<std::pair<Minimizer, GramFactorization>, NoMinimizer> pinv_solve(
    const NormalEquationSystem& sys, double rank_tol, double consistency_tol) {
  check_system(sys);
  GramFactorization f(sys.M, rank_tol);
  const double tol = consistency_tol * (1.0 + sys.B.norm());
  double violation = 0.0;
  const auto kernel = f.kernel_basis();
  if (!kernel.empty() && sys.B.rows() > 0) {
    Matrix K(sys.M.rows(), static_cast<Eigen::Index>(kernel.size()));
    for (std::size_t i = 0; i < kernel.size(); ++i) K.col(static_cast<Eigen::Index>(i)) = kernel[i];
    violation = (sys.B * K).norm();
  }
  if (violation > tol) return NoMinimizer{violation, tol};
  Matrix lambda = sys.B * f.pseudoinverse();
  MinimizerReport r = report_for(sys, f, lambda);
  return std::pair<Minimizer, GramFactorization>{Minimizer{HSOperator(std::move(lambda)), r}, std::move(f)};
}

}  // namespace

MinimizerOutcome solve_pseudoinverse(const NormalEquationSystem& sys, double rank_tol,
                                     double consistency_tol) {
  auto out = pinv_solve(sys, rank_tol, consistency_tol);
  if (auto* none = std::get_if<NoMinimizer>(&out)) return *none;
  return std::get<0>(std::move(out)).first;
}

SolutionSetOutcome solution_set(const NormalEquationSystem& sys, double rank_tol,
                                double consistency_tol) {
  auto out = pinv_solve(sys, rank_tol, consistency_tol);
  if (auto* none = std::get_if<NoMinimizer>(&out)) return *none;
  auto [minimal, f] = std::get<0>(std::move(out));
  SolutionSet set{std::move(minimal), f.kernel_basis(), false};
  set.unique = set.kernel_basis.empty();
  return set;
}

double cost_difference_bound(const SourceEnsemble& a1, const SourceEnsemble& a2,
                             const RepresentationOperator& s, const HSOperator& t) {
  if (a1.d() != s.d() || a1.p() != s.p()) throw ShapeMismatch("source (d,p) does not match the representation");
  const double s_norm = s.norm();
  const double j2 = s.j_norm() * s.j_norm();
  const double t2 = t.hs_norm() * t.hs_norm();
  return (2.0 + std::numbers::sqrt2) * s_norm * s_norm * std::max(1.0, j2) * std::max(1.0, t2) *
         ensemble_distance(a1, a2) * (a1.norm() + a2.norm());
}

}  // namespace envmm
