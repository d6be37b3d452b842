#pragma once

#include <Eigen/Core>

#include "qesurf/core.hpp"

namespace qesurf {

// Finite-difference weights on arbitrary nodes (Fornberg's recurrence).
// Returns an n x (order+1) matrix: column m holds the weights of the m-th
// derivative at x0 taken from samples at the given nodes.
Eigen::MatrixXd fd_weights(double x0, const Eigen::VectorXd& nodes, int order);

// One row of derivative weights for node i of a uniform n-point line with
// spacing h. The stencil window is the `width` nodes nearest to i (clamped at
// the line ends); width is reduced to n when the line is shorter.
struct StencilRow {
  int start = 0;          // first node of the window
  Eigen::VectorXd w;      // weights, length = window size
};

StencilRow derivative_row(int n, int i, int order, double h, int width);

// Default window widths: 9 nodes for 2D chart derivatives (order 8 interior,
// degrading to the 5-node / order-4 floor on short masked runs), 13 nodes for
// the 1D sampled-function residuals that need third derivatives.
inline constexpr int kChartStencilWidth = 9;
inline constexpr int kLineStencilWidth = 13;

// Scoped stencil-width override for derivative chains that nest three or more
// levels; wider windows push the per-level truncation kink below roundoff so
// it does not get amplified by the next 1/h^m.
class StencilWidthGuard {
 public:
  explicit StencilWidthGuard(int width);
  ~StencilWidthGuard();
  StencilWidthGuard(const StencilWidthGuard&) = delete;
  StencilWidthGuard& operator=(const StencilWidthGuard&) = delete;

 private:
  int prev_;
};

int active_stencil_width(int requested);

// d^order/dx^order of a uniformly sampled line. n >= 5 required.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> differentiate_uniform(
    const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& f,
    double h, int order, int width = kChartStencilWidth);

// Quadrature weights for one interval [x_k, x_{k+1}] of a uniform n-point
// line: integral of the degree-(window-1) Lagrange interpolant on the window
// nodes nearest to the interval. Exact for polynomials of degree < window.
struct IntervalRule {
  int start = 0;
  Eigen::VectorXd w;
};

IntervalRule interval_rule(int n, int k, double h, int window = 10);

// Cumulative integral along a uniform line: out[0] = 0,
// out[k] = integral from x_0 to x_k.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> cumulative_integral(
    const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& f,
    double h, int window = 10);

// Integral over node range [k0, k1] (k0 <= k1) of a uniform line.
template <class Scalar>
Scalar integrate_range(
    const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& f,
    double h, int k0, int k1, int window = 10);

}  // namespace qesurf
