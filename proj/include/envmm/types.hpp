#pragma once

#include <complex>

#include <Eigen/Dense>

namespace envmm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Flat index of coefficient `coeff` of component `component` in a stacked
/// source vector (component-major).
constexpr int vec_index(int component, int coeff, int p) { return component * p + coeff; }

}  // namespace envmm
