#include "qesurf/calculus.hpp"

#include <cmath>

namespace qesurf {

namespace {

// Maximal valid runs of a masked line.
std::vector<std::pair<int, int>> valid_runs(const ChartGrid& g, Axis axis, int line) {
  std::vector<std::pair<int, int>> runs;
  const int n = axis == Axis::X ? g.nx() : g.ny();
  int start = -1;
  for (int k = 0; k <= n; ++k) {
    bool ok = k < n && (axis == Axis::X ? g.valid(k, line) : g.valid(line, k));
    if (ok && start < 0) start = k;
    if (!ok && start >= 0) {
      runs.emplace_back(start, k);
      start = -1;
    }
  }
  return runs;
}

template <class Scalar>
void diff_line(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& buf, double h, int order,
               std::vector<std::pair<int, int>> const& runs,
               Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& out) {
  out.setZero();
  for (auto [b, e] : runs) {
    int len = e - b;
    if (len < 5) throw DomainError("masked gap: run too short for derivative stencil");
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> seg = buf.segment(b, len);
    out.segment(b, len) =
        differentiate_uniform<Scalar>(seg, h, order, active_stencil_width(kChartStencilWidth));
  }
}

ArrC diff_arr(const ChartGrid& g, const ArrC& f, Axis axis, int order) {
  ArrC out = ArrC::Zero(f.rows(), f.cols());
  if (axis == Axis::X) {
    if (g.nx() < 5) throw StencilError("grid too small for derivative stencil");
    for (int j = 0; j < g.ny(); ++j) {
      auto runs = g.masked() ? valid_runs(g, Axis::X, j)
                             : std::vector<std::pair<int, int>>{{0, g.nx()}};
      Eigen::VectorXcd buf = f.col(j).matrix();
      Eigen::VectorXcd d(buf.size());
      diff_line<Complex>(buf, g.hx(), order, runs, d);
      out.col(j) = d.array();
    }
  } else {
    if (g.ny() < 5) throw StencilError("grid too small for derivative stencil");
    for (int i = 0; i < g.nx(); ++i) {
      auto runs = g.masked() ? valid_runs(g, Axis::Y, i)
                             : std::vector<std::pair<int, int>>{{0, g.ny()}};
      Eigen::VectorXcd buf = f.row(i).transpose().matrix();
      Eigen::VectorXcd d(buf.size());
      diff_line<Complex>(buf, g.hy(), order, runs, d);
      out.row(i) = d.array().transpose();
    }
  }
  return out;
}

}  // namespace

ScalarField diff(const ScalarField& f, Axis axis, int order) {
  if (order != 1 && order != 2) throw StencilError("diff supports orders 1 and 2");
  return {f.grid, diff_arr(*f.grid, f.v, axis, order)};
}

ArrR diff(std::shared_ptr<const ChartGrid> grid, const ArrR& f, Axis axis, int order) {
  ArrC c = f.cast<Complex>();
  return diff_arr(*grid, c, axis, order).real();
}

std::pair<ScalarField, ScalarField> wirtinger(const ScalarField& f) {
  ScalarField fx = diff(f, Axis::X, 1);
  ScalarField fy = diff(f, Axis::Y, 1);
  const Complex I{0, 1};
  ScalarField dz{f.grid, 0.5 * (fx.v - I * fy.v)};
  ScalarField dzb{f.grid, 0.5 * (fx.v + I * fy.v)};
  return {std::move(dz), std::move(dzb)};
}

InverseMetric inverse_metric(const Metric2D& g) {
  ArrR det = g.det();
  if ((det <= 0.0).any() && !g.grid->masked())
    throw GeometryError("metric determinant not positive");
  InverseMetric inv;
  inv.ixx = g.gyy / det;
  inv.ixy = -g.gxy / det;
  inv.iyy = g.gxx / det;
  return inv;
}

Christoffels christoffels(const Metric2D& g) {
  auto grid = g.grid;
  ArrR dx_gxx = diff(grid, g.gxx, Axis::X, 1), dy_gxx = diff(grid, g.gxx, Axis::Y, 1);
  ArrR dx_gxy = diff(grid, g.gxy, Axis::X, 1), dy_gxy = diff(grid, g.gxy, Axis::Y, 1);
  ArrR dx_gyy = diff(grid, g.gyy, Axis::X, 1), dy_gyy = diff(grid, g.gyy, Axis::Y, 1);
  InverseMetric inv = inverse_metric(g);

  // Gamma_{l,ij} = (d_i g_{jl} + d_j g_{il} - d_l g_{ij}) / 2
  ArrR c_x_xx = 0.5 * dx_gxx;
  ArrR c_y_xx = dx_gxy - 0.5 * dy_gxx;
  ArrR c_x_xy = 0.5 * dy_gxx;
  ArrR c_y_xy = 0.5 * dx_gyy;
  ArrR c_x_yy = dy_gxy - 0.5 * dx_gyy;
  ArrR c_y_yy = 0.5 * dy_gyy;

  Christoffels c;
  c.xxx = inv.ixx * c_x_xx + inv.ixy * c_y_xx;
  c.xxy = inv.ixx * c_x_xy + inv.ixy * c_y_xy;
  c.xyy = inv.ixx * c_x_yy + inv.ixy * c_y_yy;
  c.yxx = inv.ixy * c_x_xx + inv.iyy * c_y_xx;
  c.yxy = inv.ixy * c_x_xy + inv.iyy * c_y_xy;
  c.yyy = inv.ixy * c_x_yy + inv.iyy * c_y_yy;
  return c;
}

ScalarField scalar_curvature(const Metric2D& g) {
  if (g.gauge == Gauge::Conformal && g.H) {
    auto grid = g.grid;
    ArrR lapH = diff(grid, *g.H, Axis::X, 2) + diff(grid, *g.H, Axis::Y, 2);
    ArrR R = -0.5 * (-*g.H).exp() * lapH;  // -2 e^{-H} * (lap H / 4)
    ScalarField out{grid, R.cast<Complex>()};
    return out;
  }
  return scalar_curvature_general(g);
}

ScalarField scalar_curvature_general(const Metric2D& g) {
  auto grid = g.grid;
  Christoffels c = christoffels(g);
  InverseMetric inv = inverse_metric(g);

  // Ric_{jk} = d_i G^i_{jk} - d_j G^i_{ik} + G^i_{im} G^m_{jk} - G^i_{jm} G^m_{ik}
  ArrR trace_x = c.xxx + c.yxy;  // G^i_{ix}
  ArrR trace_y = c.xxy + c.yyy;  // G^i_{iy}

  ArrR ric_xx = diff(grid, c.xxx, Axis::X, 1) + diff(grid, c.yxx, Axis::Y, 1)
              - diff(grid, trace_x, Axis::X, 1)
              + trace_x * c.xxx + trace_y * c.yxx
              - (c.xxx * c.xxx + 2.0 * c.xxy * c.yxx + c.yxy * c.yxy);
  ArrR ric_yy = diff(grid, c.xyy, Axis::X, 1) + diff(grid, c.yyy, Axis::Y, 1)
              - diff(grid, trace_y, Axis::Y, 1)
              + trace_x * c.xyy + trace_y * c.yyy
              - (c.xxy * c.xxy + 2.0 * c.xyy * c.yxy + c.yyy * c.yyy);
  // j = x, k = y
  ArrR ric_xy = diff(grid, c.xxy, Axis::X, 1) + diff(grid, c.yxy, Axis::Y, 1)
              - diff(grid, trace_y, Axis::X, 1)
              + trace_x * c.xxy + trace_y * c.yxy
              - (c.xxx * c.xxy + c.xxy * c.yxy + c.yxx * c.xyy + c.yxy * c.yyy);

  ArrR R = inv.ixx * ric_xx + 2.0 * inv.ixy * ric_xy + inv.iyy * ric_yy;
  return {grid, R.cast<Complex>()};
}

OneForm hodge_star(const OneForm& a, const Metric2D& g) {
  OneForm out(a.grid);
  if (g.gauge == Gauge::Conformal) {
    out.ax = -a.ay;
    out.ay = a.ax;
    return out;
  }
  ArrR det = g.det();
  if ((det <= 0.0).any() && !g.grid->masked())
    throw GeometryError("degenerate metric in hodge star");
  ArrR vol = det.sqrt();
  InverseMetric inv = inverse_metric(g);
  out.ax = -(vol * inv.ixy).cast<Complex>() * a.ax - (vol * inv.iyy).cast<Complex>() * a.ay;
  out.ay = (vol * inv.ixx).cast<Complex>() * a.ax + (vol * inv.ixy).cast<Complex>() * a.ay;
  return out;
}

ScalarField d_of_oneform(const OneForm& a) {
  ScalarField dxay = diff({a.grid, a.ay}, Axis::X, 1);
  ScalarField dyax = diff({a.grid, a.ax}, Axis::Y, 1);
  return {a.grid, dxay.v - dyax.v};
}

ScalarField star_d(const OneForm& a, const Metric2D& g) {
  ScalarField d = d_of_oneform(a);
  ArrR vol = g.det().sqrt();
  return {a.grid, d.v / vol.cast<Complex>()};
}

ScalarField laplacian(const Metric2D& g, const ScalarField& f) {
  auto grid = g.grid;
  if (g.gauge == Gauge::Conformal && g.H) {
    ArrC lap = diff(f, Axis::X, 2).v + diff(f, Axis::Y, 2).v;
    ArrR conf = 2.0 * g.H->exp();
    return {grid, lap / conf.cast<Complex>()};
  }
  InverseMetric inv = inverse_metric(g);
  ArrR vol = g.det().sqrt();
  ScalarField fx = diff(f, Axis::X, 1), fy = diff(f, Axis::Y, 1);
  ArrC vx = (vol * inv.ixx).cast<Complex>() * fx.v + (vol * inv.ixy).cast<Complex>() * fy.v;
  ArrC vy = (vol * inv.ixy).cast<Complex>() * fx.v + (vol * inv.iyy).cast<Complex>() * fy.v;
  ArrC div = diff({grid, vx}, Axis::X, 1).v + diff({grid, vy}, Axis::Y, 1).v;
  return {grid, div / vol.cast<Complex>()};
}

CovariantOneForm covariant_derivative(const Metric2D& g, const OneForm& a) {
  Christoffels c = christoffels(g);
  ScalarField axf{a.grid, a.ax}, ayf{a.grid, a.ay};
  ArrC dx_ax = diff(axf, Axis::X, 1).v, dy_ax = diff(axf, Axis::Y, 1).v;
  ArrC dx_ay = diff(ayf, Axis::X, 1).v, dy_ay = diff(ayf, Axis::Y, 1).v;
  CovariantOneForm n;
  n.xx = dx_ax - c.xxx.cast<Complex>() * a.ax - c.yxx.cast<Complex>() * a.ay;
  n.xy = dx_ay - c.xxy.cast<Complex>() * a.ax - c.yxy.cast<Complex>() * a.ay;
  n.yx = dy_ax - c.xxy.cast<Complex>() * a.ax - c.yxy.cast<Complex>() * a.ay;
  n.yy = dy_ay - c.xyy.cast<Complex>() * a.ax - c.yyy.cast<Complex>() * a.ay;
  return n;
}

SymTensor hessian(const Metric2D& g, const ScalarField& f) {
  OneForm df(f.grid);
  df.ax = diff(f, Axis::X, 1).v;
  df.ay = diff(f, Axis::Y, 1).v;
  Christoffels c = christoffels(g);
  SymTensor h;
  h.xx = diff({f.grid, df.ax}, Axis::X, 1).v - c.xxx.cast<Complex>() * df.ax - c.yxx.cast<Complex>() * df.ay;
  h.xy = diff({f.grid, df.ay}, Axis::X, 1).v - c.xxy.cast<Complex>() * df.ax - c.yxy.cast<Complex>() * df.ay;
  h.yy = diff({f.grid, df.ay}, Axis::Y, 1).v - c.xyy.cast<Complex>() * df.ax - c.yyy.cast<Complex>() * df.ay;
  return h;
}

std::pair<ArrC, ArrC> raise(const Metric2D& g, const OneForm& a) {
  InverseMetric inv = inverse_metric(g);
  ArrC vx = inv.ixx.cast<Complex>() * a.ax + inv.ixy.cast<Complex>() * a.ay;
  ArrC vy = inv.ixy.cast<Complex>() * a.ax + inv.iyy.cast<Complex>() * a.ay;
  return {std::move(vx), std::move(vy)};
}

ArrC metric_pairing(const Metric2D& g, const OneForm& a, const OneForm& b) {
  InverseMetric inv = inverse_metric(g);
  return inv.ixx.cast<Complex>() * a.ax * b.ax +
         inv.ixy.cast<Complex>() * (a.ax * b.ay + a.ay * b.ax) +
         inv.iyy.cast<Complex>() * a.ay * b.ay;
}

ScalarField divergence(const Metric2D& g, const ArrC& vx, const ArrC& vy) {
  ArrR vol = g.det().sqrt();
  ArrC wx = vol.cast<Complex>() * vx;
  ArrC wy = vol.cast<Complex>() * vy;
  ArrC div = diff({g.grid, wx}, Axis::X, 1).v + diff({g.grid, wy}, Axis::Y, 1).v;
  return {g.grid, div / vol.cast<Complex>()};
}

Complex line_integrate(const OneForm& a, const Polyline& path) {
  if (path.vertices.size() < 2) throw DomainError("path needs at least two vertices");
  const ChartGrid& g = *a.grid;
  auto check_segment = [&g](int i0, int j0, int i1, int j1) {
    for (int i = std::min(i0, i1); i <= std::max(i0, i1); ++i)
      for (int j = std::min(j0, j1); j <= std::max(j0, j1); ++j)
        if (!g.valid(i, j))
          throw DomainError("path crosses a masked region");
  };
  Complex total{0, 0};
  for (size_t s = 0; s + 1 < path.vertices.size(); ++s) {
    auto [xa, ya] = path.vertices[s];
    auto [xb, yb] = path.vertices[s + 1];
    auto [ia, ja] = g.node_at(xa, ya);
    auto [ib, jb] = g.node_at(xb, yb);
    check_segment(ia, ja, ib, jb);
    if (ja == jb && ia != ib) {
      Eigen::VectorXcd line = a.ax.col(ja).matrix();
      int k0 = std::min(ia, ib), k1 = std::max(ia, ib);
      Complex seg = integrate_range<Complex>(line, g.hx(), k0, k1);
      total += (ib > ia) ? seg : -seg;
    } else if (ia == ib && ja != jb) {
      Eigen::VectorXcd line = a.ay.row(ia).transpose().matrix();
      int k0 = std::min(ja, jb), k1 = std::max(ja, jb);
      Complex seg = integrate_range<Complex>(line, g.hy(), k0, k1);
      total += (jb > ja) ? seg : -seg;
    } else if (ia != ib && ja != jb) {
      throw DomainError("line_integrate supports axis-aligned segments only");
    }
  }
  return total;
}

ScalarField potential_from_oneform(const OneForm& a, int i0, int j0, Complex value0) {
  const ChartGrid& g = *a.grid;
  if (g.masked())
    throw DomainError("potential reconstruction needs an unmasked chart");
  ScalarField out{a.grid, ArrC::Zero(g.nx(), g.ny())};
  // integrate a_x along the anchor row
  Eigen::VectorXcd row = a.ax.col(j0).matrix();
  Eigen::VectorXcd cx = cumulative_integral<Complex>(row, g.hx());
  Eigen::VectorXcd anchor = cx.array() - cx[i0] + value0;
  parallel_for(g.nx(), [&](std::ptrdiff_t beg, std::ptrdiff_t end) {
    for (std::ptrdiff_t i = beg; i < end; ++i) {
      Eigen::VectorXcd col = a.ay.row(i).transpose().matrix();
      Eigen::VectorXcd cy = cumulative_integral<Complex>(col, g.hy());
      out.v.row(i) = (cy.array() - cy[j0] + anchor[i]).transpose();
    }
  });
  return out;
}

}  // namespace qesurf
