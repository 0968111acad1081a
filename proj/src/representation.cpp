#include "envmm/representation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "envmm/errors.hpp"
#include "envmm/kernels.hpp"

namespace envmm {

namespace {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix combined_input(const SourceEnsemble& a, const std::optional<SourceEnsemble>& xi) {
  if (!xi) return a.values();
  return (a + *xi).values();
}

}  // namespace

RepresentationOperator::RepresentationOperator(int d, int p, Matrix s1, Matrix s2, double j_norm)
    : d_(d), p_(p), s1_(std::move(s1)), s2_(std::move(s2)), j_norm_(j_norm) {
  if (d < 1 || p < 1) throw InvalidInput("representation needs d, p >= 1");
  if (s1_.cols() != d * p || s2_.cols() != d * p) {
    throw ShapeMismatch("S1/S2 must have d*p = " + std::to_string(d * p) + " columns");
  }
  if (s1_.rows() < 1 || s2_.rows() < 1) throw ShapeMismatch("S1 and S2 need at least one row");
  if (!s1_.allFinite() || !s2_.allFinite()) throw InvalidInput("representation has non-finite entries");
  if (!(j_norm_ >= 0.0) || !std::isfinite(j_norm_)) throw InvalidInput("||J|| must be finite and >= 0");
  s1_norm_ = spectral_norm(s1_);
  s2_norm_ = spectral_norm(s2_);
  norm_ = spectral_norm(stacked());
}

Matrix RepresentationOperator::stacked() const {
  Matrix out(s1_.rows() + s2_.rows(), dim());
  out << s1_, s2_;
  return out;
}

ObservedEnsemble apply(const RepresentationOperator& s, const SourceEnsemble& a,
                       const std::optional<SourceEnsemble>& xi) {
  if (a.d() != s.d() || a.p() != s.p()) {
    throw ShapeMismatch("source (d,p) does not match the representation");
  }
  const Matrix input = combined_input(a, xi);
  return {a.space(), kernels::parallel::apply_rows(input, s.s1()),
          kernels::parallel::apply_rows(input, s.s2())};
}

ObservedMoments observed_second_moments(const ObservedEnsemble& o) {
  const auto w = o.space.weights();
  return {kernels::parallel::weighted_gram(o.Y, o.Y, w), kernels::parallel::weighted_gram(o.Y, o.X, w),
          kernels::parallel::weighted_gram(o.X, o.X, w)};
}

TruncatedRepresentation truncate(const RepresentationOperator& s, int n_in, int n_out) {
  if (n_in < 1 || n_in > s.p()) {
    throw BadTruncation("n_in=" + std::to_string(n_in) + " outside [1, " + std::to_string(s.p()) + "]");
  }
  const int out_max = std::min(s.p_out(), s.q());
  if (n_out < 1 || n_out > out_max) {
    throw BadTruncation("n_out=" + std::to_string(n_out) + " outside [1, " + std::to_string(out_max) + "]");
  }
  TruncatedRepresentation t{s.d(), s.p(), n_in, n_out, Matrix(2 * n_out, s.d() * n_in)};
  for (int c = 0; c < s.d() * n_in; ++c) {
    const int parent = t.parent_column(c);
    t.B.col(c).head(n_out) = s.s1().col(parent).head(n_out);
    t.B.col(c).tail(n_out) = s.s2().col(parent).head(n_out);
  }
  return t;
}

Vector restrict_input(const TruncatedRepresentation& t, const Vector& v) {
  if (v.size() != t.d * t.p) throw ShapeMismatch("input vector has wrong length");
  Vector out(t.d * t.n_in);
  for (int c = 0; c < out.size(); ++c) out(c) = v(t.parent_column(c));
  return out;
}

TruncationResidual truncation_residual(const RepresentationOperator& s,
                                       const TruncatedRepresentation& t, const SourceEnsemble& a,
                                       const std::optional<SourceEnsemble>& xi) {
  if (a.d() != s.d() || a.p() != s.p() || t.d != s.d() || t.p != s.p()) {
    throw ShapeMismatch("truncation, representation and source disagree on (d,p)");
  }
  const Matrix input = combined_input(a, xi);
  const int n = t.n_out;
  Matrix top(2 * n, s.dim());
  top << s.s1().topRows(n), s.s2().topRows(n);

  TruncationResidual out;
  out.per_atom.resize(a.atom_count());
  for (int j = 0; j < a.atom_count(); ++j) {
    const Vector v = input.row(j).transpose();
    const Vector delta = top * v - t.B * restrict_input(t, v);
    out.per_atom[j] = delta.norm();
    out.aggregate += a.space().weight(j) * delta.squaredNorm();
  }
  return out;
}

}  // namespace envmm
