#pragma once

// Weighted reductions over atoms. Every kernel has a serial reference in
// `serial::` and an OpenMP version in `parallel::`. The parallel versions
// reduce fixed-size atom blocks and then sum the block partials in block
// order, so their output does not depend on the number of threads.

#include <span>

#include "envmm/types.hpp"

namespace envmm::kernels {

/// Atoms per reduction block in the parallel kernels.
inline constexpr int kBlockAtoms = 32;

/// Upper bound on OpenMP threads. Reads ENVMM_THREADS once (0 or unset = auto).
int max_threads();
/// Overrides the thread cap for this process; 0 restores the automatic default.
void set_max_threads(int n);

namespace serial {

/// Σ_j w_j · u_j v_jᵀ over the rows u_j of U and v_j of V.
Matrix weighted_gram(const Matrix& U, const Matrix& V, std::span<const double> w);

/// Σ_j w_j · ‖y_j − Λ x_j‖² over the rows of Y and X.
double weighted_residual_energy(const Matrix& Y, const Matrix& X, const Matrix& lambda,
                                std::span<const double> w);

/// Row-wise application: row j of the result is L · row_j(V).
Matrix apply_rows(const Matrix& V, const Matrix& L);

}  // namespace serial

namespace parallel {

Matrix weighted_gram(const Matrix& U, const Matrix& V, std::span<const double> w);
double weighted_residual_energy(const Matrix& Y, const Matrix& X, const Matrix& lambda,
                                std::span<const double> w);
Matrix apply_rows(const Matrix& V, const Matrix& L);

}  // namespace parallel

}  // namespace envmm::kernels
