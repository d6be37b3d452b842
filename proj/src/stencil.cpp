#include "qesurf/stencil.hpp"

#include <array>

namespace qesurf {

namespace {
thread_local int g_width_override = 0;
}

StencilWidthGuard::StencilWidthGuard(int width) : prev_(g_width_override) {
  g_width_override = width;
}

StencilWidthGuard::~StencilWidthGuard() { g_width_override = prev_; }

int active_stencil_width(int requested) {
  return g_width_override > 0 ? g_width_override : requested;
}

Eigen::MatrixXd fd_weights(double x0, const Eigen::VectorXd& nodes, int order) {
  const int n = static_cast<int>(nodes.size());
  if (n < order + 1) throw StencilError("fd_weights: not enough nodes for requested derivative");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, order + 1);
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, order);
    double c2 = 1.0;
    double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k)
        c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c;
}

StencilRow derivative_row(int n, int i, int order, double h, int width) {
  if (n < 5) throw StencilError("derivative stencil needs at least 5 points");
  int w = std::min(width, n);
  if (order == 2 && w == 5 && n >= 6) w = 6;  // keep one-sided 2nd derivatives at 4th order
  int start = std::clamp(i - w / 2, 0, n - w);
  if (start != i - w / 2 && w < 13) {
    // Clamped window: widen to offset the one-sided order loss, so the
    // derivative error stays continuous across the boundary zone. Wider
    // one-sided rows are not used: their weight sums grow fast and amplify
    // rounding noise instead.
    w = std::min({w + 4, 13, n});
    start = std::clamp(i - w / 2, 0, n - w);
  }
  Eigen::VectorXd nodes(w);
  for (int k = 0; k < w; ++k) nodes[k] = (start + k) * h;
  Eigen::MatrixXd c = fd_weights(i * h, nodes, order);
  StencilRow row;
  row.start = start;
  row.w = c.col(order);
  return row;
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> differentiate_uniform(
    const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& f,
    double h, int order, int width) {
  const int n = static_cast<int>(f.size());
  if (n < 5) throw StencilError("derivative stencil needs at least 5 points");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n);
  // Weights repeat per window offset; the center value is subtracted before
  // the dot product so constants differentiate to exactly zero and the
  // cancellation error scales with the local variation, not with |f|/h^m.
  struct CachedRow { bool have = false; int start = 0; Eigen::VectorXd w; };
  std::vector<CachedRow> cache(static_cast<size_t>(width) + 32);
  for (int i = 0; i < n; ++i) {
    int w0 = std::min(width, n);
    if (order == 2 && w0 == 5 && n >= 6) w0 = 6;
    bool clamped = std::clamp(i - w0 / 2, 0, n - w0) != i - w0 / 2;
    size_t key;
    if (!clamped) {
      key = 0;
    } else if (i - w0 / 2 < 0) {
      key = 1 + static_cast<size_t>(i);  // left edge
    } else {
      key = 1 + static_cast<size_t>(width + 8) + static_cast<size_t>(n - 1 - i);
    }
    if (key >= cache.size()) cache.resize(key + 1);
    CachedRow& row = cache[key];
    if (!row.have) {
      StencilRow sr = derivative_row(n, i, order, h, width);
      row.have = true;
      row.w = sr.w;
      row.start = sr.start - i;  // relative to the node
    }
    const int start = i + row.start;
    const Scalar center = f[i];
    Scalar acc{};
    for (int k = 0; k < row.w.size(); ++k) acc += row.w[k] * (f[start + k] - center);
    out[i] = acc;
  }
  return out;
}

template Eigen::Matrix<double, Eigen::Dynamic, 1> differentiate_uniform<double>(
    const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 1>>&, double, int, int);
template Eigen::Matrix<Complex, Eigen::Dynamic, 1> differentiate_uniform<Complex>(
    const Eigen::Ref<const Eigen::Matrix<Complex, Eigen::Dynamic, 1>>&, double, int, int);

namespace {
// 5-point Gauss-Legendre on [-1, 1]; exact for polynomials of degree <= 9.
constexpr std::array<double, 5> kGlx = {
    -0.9061798459386639928, -0.5384693101056830910, 0.0,
    0.5384693101056830910, 0.9061798459386639928};
constexpr std::array<double, 5> kGlw = {
    0.2369268850561890875, 0.4786286704993664680, 0.5688888888888888889,
    0.4786286704993664680, 0.2369268850561890875};
}  // namespace

IntervalRule interval_rule(int n, int k, double h, int window) {
  if (n < 2 || k < 0 || k >= n - 1) throw StencilError("interval_rule: bad interval");
  int w = std::min(window, n);
  int start = std::clamp(k - (w - 2) / 2, 0, n - w);
  IntervalRule rule;
  rule.start = start;
  rule.w = Eigen::VectorXd::Zero(w);
  // Integrate each Lagrange basis polynomial of the window over [x_k, x_k+h].
  const double a = k * h, half = 0.5 * h;
  for (int g = 0; g < 5; ++g) {
    const double x = a + half * (kGlx[g] + 1.0);
    for (int j = 0; j < w; ++j) {
      double lj = 1.0;
      const double xj = (start + j) * h;
      for (int m = 0; m < w; ++m) {
        if (m == j) continue;
        const double xm = (start + m) * h;
        lj *= (x - xm) / (xj - xm);
      }
      rule.w[j] += kGlw[g] * half * lj;
    }
  }
  return rule;
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> cumulative_integral(
    const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& f,
    double h, int window) {
  const int n = static_cast<int>(f.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n);
  out[0] = Scalar{};
  for (int k = 0; k + 1 < n; ++k) {
    IntervalRule rule = interval_rule(n, k, h, window);
    Scalar acc{};
    for (int j = 0; j < rule.w.size(); ++j) acc += rule.w[j] * f[rule.start + j];
    out[k + 1] = out[k] + acc;
  }
  return out;
}

template Eigen::Matrix<double, Eigen::Dynamic, 1> cumulative_integral<double>(
    const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 1>>&, double, int);
template Eigen::Matrix<Complex, Eigen::Dynamic, 1> cumulative_integral<Complex>(
    const Eigen::Ref<const Eigen::Matrix<Complex, Eigen::Dynamic, 1>>&, double, int);

template <class Scalar>
Scalar integrate_range(
    const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& f,
    double h, int k0, int k1, int window) {
  Scalar acc{};
  for (int k = k0; k < k1; ++k) {
    IntervalRule rule = interval_rule(static_cast<int>(f.size()), k, h, window);
    for (int j = 0; j < rule.w.size(); ++j) acc += rule.w[j] * f[rule.start + j];
  }
  return acc;
}

template double integrate_range<double>(
    const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 1>>&, double, int, int, int);
template Complex integrate_range<Complex>(
    const Eigen::Ref<const Eigen::Matrix<Complex, Eigen::Dynamic, 1>>&, double, int, int, int);

}  // namespace qesurf
