#include "envmm/kernels.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>
#include <vector>

#include "envmm/errors.hpp"

namespace envmm::kernels {

namespace {

std::atomic<int> g_thread_override{-1};

int env_threads() {
  static const int value = [] {
    const char* raw = std::getenv("ENVMM_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    try {
      const int n = std::stoi(raw);
      return n > 0 ? n : 0;
    } catch (const std::exception&) {
      return 0;
    }
  }();
  return value;
}

void check_rows(const Matrix& A, const Matrix& B, std::span<const double> w) {
  if (A.rows() != B.rows() || A.rows() != static_cast<Eigen::Index>(w.size())) {
    throw ShapeMismatch("atom counts differ: " + std::to_string(A.rows()) + ", " +
                        std::to_string(B.rows()) + ", " + std::to_string(w.size()));
  }
}

int block_count(Eigen::Index atoms) {
  return static_cast<int>((atoms + kBlockAtoms - 1) / kBlockAtoms);
}

}  // namespace

int max_threads() {
  const int override_n = g_thread_override.load();
  if (override_n > 0) return override_n;
  const int env = env_threads();
  return env > 0 ? env : omp_get_max_threads();
}

void set_max_threads(int n) { g_thread_override.store(n > 0 ? n : -1); }

namespace serial {

Matrix weighted_gram(const Matrix& U, const Matrix& V, std::span<const double> w) {
  check_rows(U, V, w);
  Matrix out = Matrix::Zero(U.cols(), V.cols());
  for (Eigen::Index j = 0; j < U.rows(); ++j) {
    for (Eigen::Index a = 0; a < U.cols(); ++a) {
      const double wu = w[j] * U(j, a);
      for (Eigen::Index b = 0; b < V.cols(); ++b) out(a, b) += wu * V(j, b);
    }
  }
  return out;
}

double weighted_residual_energy(const Matrix& Y, const Matrix& X, const Matrix& lambda,
                                std::span<const double> w) {
  check_rows(Y, X, w);
  if (lambda.rows() != Y.cols() || lambda.cols() != X.cols()) {
    throw ShapeMismatch("operator is " + std::to_string(lambda.rows()) + "x" +
                        std::to_string(lambda.cols()) + ", observations need " +
                        std::to_string(Y.cols()) + "x" + std::to_string(X.cols()));
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < Y.rows(); ++j) {
    double atom = 0.0;
    for (Eigen::Index k = 0; k < Y.cols(); ++k) {
      double r = Y(j, k);
      for (Eigen::Index l = 0; l < X.cols(); ++l) r -= lambda(k, l) * X(j, l);
      atom += r * r;
    }
    total += w[j] * atom;
  }
  return total;
}

Matrix apply_rows(const Matrix& V, const Matrix& L) {
  if (L.cols() != V.cols()) {
    throw ShapeMismatch("map expects " + std::to_string(L.cols()) + " inputs, rows have " +
                        std::to_string(V.cols()));
  }
  Matrix out = Matrix::Zero(V.rows(), L.rows());
  for (Eigen::Index j = 0; j < V.rows(); ++j) {
    for (Eigen::Index r = 0; r < L.rows(); ++r) {
      double acc = 0.0;
      for (Eigen::Index c = 0; c < L.cols(); ++c) acc += L(r, c) * V(j, c);
      out(j, r) = acc;
    }
  }
  return out;
}

}  // namespace serial

namespace parallel {

Matrix weighted_gram(const Matrix& U, const Matrix& V, std::span<const double> w) {
  check_rows(U, V, w);
  const Eigen::Index atoms = U.rows();
  const int blocks = block_count(atoms);
  std::vector<Matrix> partial(blocks);
  const Eigen::Map<const Vector> weights(w.data(), atoms);

#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int b = 0; b < blocks; ++b) {
    const Eigen::Index begin = static_cast<Eigen::Index>(b) * kBlockAtoms;
    const Eigen::Index len = std::min<Eigen::Index>(kBlockAtoms, atoms - begin);
    const auto Ub = U.middleRows(begin, len);
    const auto Vb = V.middleRows(begin, len);
    partial[b].noalias() = Ub.transpose() * weights.segment(begin, len).asDiagonal() * Vb;
  }

  Matrix out = Matrix::Zero(U.cols(), V.cols());
  for (const auto& part : partial) out += part;
  return out;
}

double weighted_residual_energy(const Matrix& Y, const Matrix& X, const Matrix& lambda,
                                std::span<const double> w) {
  check_rows(Y, X, w);
  if (lambda.rows() != Y.cols() || lambda.cols() != X.cols()) {
    throw ShapeMismatch("operator is " + std::to_string(lambda.rows()) + "x" +
                        std::to_string(lambda.cols()) + ", observations need " +
                        std::to_string(Y.cols()) + "x" + std::to_string(X.cols()));
  }
  const Eigen::Index atoms = Y.rows();
  const int blocks = block_count(atoms);
  std::vector<double> partial(blocks, 0.0);

#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int b = 0; b < blocks; ++b) {
    const Eigen::Index begin = static_cast<Eigen::Index>(b) * kBlockAtoms;
    const Eigen::Index len = std::min<Eigen::Index>(kBlockAtoms, atoms - begin);
    const Matrix resid = Y.middleRows(begin, len) - X.middleRows(begin, len) * lambda.transpose();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < len; ++j) acc += w[begin + j] * resid.row(j).squaredNorm();
    partial[b] = acc;
  }

  double total = 0.0;
  for (double part : partial) total += part;
  return total;
}

Matrix apply_rows(const Matrix& V, const Matrix& L) {
  if (L.cols() != V.cols()) {
    throw ShapeMismatch("map expects " + std::to_string(L.cols()) + " inputs, rows have " +
                        std::to_string(V.cols()));
  }
  const Eigen::Index atoms = V.rows();
  const int blocks = block_count(atoms);
  Matrix out(atoms, L.rows());

#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int b = 0; b < blocks; ++b) {
    const Eigen::Index begin = static_cast<Eigen::Index>(b) * kBlockAtoms;
    const Eigen::Index len = std::min<Eigen::Index>(kBlockAtoms, atoms - begin);
    out.middleRows(begin, len).noalias() = V.middleRows(begin, len) * L.transpose();
  }
  return out;
}

}  // namespace parallel

}  // namespace envmm::kernels
