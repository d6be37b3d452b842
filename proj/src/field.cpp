#include "qesurf/field.hpp"

#include <cmath>

namespace qesurf {

double sup_over(const ArrR& absfield, const ArrB& where) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < absfield.cols(); ++j)
    for (Eigen::Index i = 0; i < absfield.rows(); ++i)
      if (where(i, j)) m = std::max(m, absfield(i, j));
  return m;
}

double ScalarField::sup_abs(int collar) const {
  return sup_over(v.abs(), grid->interior(collar));
}

double ScalarField::sup_imag(int collar) const {
  return sup_over(v.imag().abs(), grid->interior(collar));
}

ScalarField make_field(std::shared_ptr<const ChartGrid> g,
                       const std::function<Complex(double, double)>& f) {
  ScalarField out(g);
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i)
      out.v(i, j) = g->valid(i, j) ? f(g->x(i), g->y(j)) : Complex{0, 0};
  return out;
}

ScalarField constant_field(std::shared_ptr<const ChartGrid> g, Complex value) {
  ScalarField out(g);
  out.v.setConstant(value);
  return out;
}

OneForm make_oneform(std::shared_ptr<const ChartGrid> g,
                     const std::function<Complex(double, double)>& fx,
                     const std::function<Complex(double, double)>& fy) {
  OneForm out(g);
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i) {
      if (!g->valid(i, j)) continue;
      out.ax(i, j) = fx(g->x(i), g->y(j));
      out.ay(i, j) = fy(g->x(i), g->y(j));
    }
  return out;
}

void Metric2D::check_riemannian() const {
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i) {
      if (!grid->valid(i, j)) continue;
      double d = gxx(i, j) * gyy(i, j) - gxy(i, j) * gxy(i, j);
      if (!(gxx(i, j) > 0.0) || !(d > 0.0))
        throw GeometryError("metric is not positive definite on the chart");
    }
}

Metric2D conformal_metric(std::shared_ptr<const ChartGrid> g, const ArrR& H) {
  Metric2D m;
  m.grid = std::move(g);
  m.gauge = Gauge::Conformal;
  m.H = H;
  ArrR factor = 2.0 * H.exp();
  m.gxx = factor;
  m.gyy = factor;
  m.gxy = ArrR::Zero(factor.rows(), factor.cols());
  return m;
}

Metric2D flat_metric(std::shared_ptr<const ChartGrid> g) {
  ArrR H = ArrR::Constant(g->nx(), g->ny(), -std::log(2.0));
  return conformal_metric(std::move(g), H);
}

Metric2D general_metric(std::shared_ptr<const ChartGrid> g,
                        ArrR gxx, ArrR gxy, ArrR gyy) {
  Metric2D m;
  m.grid = std::move(g);
  m.gauge = Gauge::General;
  m.gxx = std::move(gxx);
  m.gxy = std::move(gxy);
  m.gyy = std::move(gyy);
  return m;
}

double Mat2Field::sup_norm(int collar) const {
  return sup_over(frobenius(*this), grid->interior(collar));
}

Mat2Field matmul(const Mat2Field& a, const Mat2Field& b) {
  Mat2Field c(a.grid);
  c.a00 = a.a00 * b.a00 + a.a01 * b.a10;
  c.a01 = a.a00 * b.a01 + a.a01 * b.a11;
  c.a10 = a.a10 * b.a00 + a.a11 * b.a10;
  c.a11 = a.a10 * b.a01 + a.a11 * b.a11;
  return c;
}

Mat2Field commutator(const Mat2Field& a, const Mat2Field& b) {
  return matmul(a, b) - matmul(b, a);
}

Mat2Field adjoint(const Mat2Field& a) {
  Mat2Field c(a.grid);
  c.a00 = a.a00.conjugate();
  c.a01 = a.a10.conjugate();
  c.a10 = a.a01.conjugate();
  c.a11 = a.a11.conjugate();
  return c;
}

Mat2Field operator+(const Mat2Field& a, const Mat2Field& b) {
  Mat2Field c(a.grid);
  c.a00 = a.a00 + b.a00;
  c.a01 = a.a01 + b.a01;
  c.a10 = a.a10 + b.a10;
  c.a11 = a.a11 + b.a11;
  return c;
}

Mat2Field operator-(const Mat2Field& a, const Mat2Field& b) {
  Mat2Field c(a.grid);
  c.a00 = a.a00 - b.a00;
  c.a01 = a.a01 - b.a01;
  c.a10 = a.a10 - b.a10;
  c.a11 = a.a11 - b.a11;
  return c;
}

Mat2Field scale(const Mat2Field& a, Complex s) {
  Mat2Field c(a.grid);
  c.a00 = a.a00 * s;
  c.a01 = a.a01 * s;
  c.a10 = a.a10 * s;
  c.a11 = a.a11 * s;
  return c;
}

Mat2Field scale(const Mat2Field& a, const ArrC& s) {
  Mat2Field c(a.grid);
  c.a00 = a.a00 * s;
  c.a01 = a.a01 * s;
  c.a10 = a.a10 * s;
  c.a11 = a.a11 * s;
  return c;
}

Mat2Field inverse(const Mat2Field& a) {
  ArrC det = a.a00 * a.a11 - a.a01 * a.a10;
  if ((det.abs() < 1e-300).any()) throw GeometryError("singular matrix field");
  Mat2Field c(a.grid);
  c.a00 = a.a11 / det;
  c.a01 = -a.a01 / det;
  c.a10 = -a.a10 / det;
  c.a11 = a.a00 / det;
  return c;
}

ArrR frobenius(const Mat2Field& a) {
  return (a.a00.abs2() + a.a01.abs2() + a.a10.abs2() + a.a11.abs2()).sqrt();
}

Complex sample(const ScalarField& f, double x, double y, int window) {
  const ChartGrid& g = *f.grid;
  if (g.masked()) throw DomainError("off-node sampling needs an unmasked chart");
  const int nx = g.nx(), ny = g.ny();
  const int w = std::min({window, nx, ny});
  double fi = (x - g.x_min()) / g.hx();
  double fj = (y - g.y_min()) / g.hy();
  if (fi < -1e-9 || fi > nx - 1 + 1e-9 || fj < -1e-9 || fj > ny - 1 + 1e-9)
    throw DomainError("sample point outside grid");
  int i0 = std::clamp(static_cast<int>(std::floor(fi)) - (w - 1) / 2, 0, nx - w);
  int j0 = std::clamp(static_cast<int>(std::floor(fj)) - (w - 1) / 2, 0, ny - w);

  auto lagrange = [w](double t, int k) {
    double l = 1.0;
    for (int m = 0; m < w; ++m)
      if (m != k) l *= (t - m) / (k - m);
    return l;
  };
  Complex acc{0, 0};
  for (int j = 0; j < w; ++j) {
    const double ly = lagrange(fj - j0, j);
    Complex row{0, 0};
    for (int i = 0; i < w; ++i) row += lagrange(fi - i0, i) * f.v(i0 + i, j0 + j);
    acc += ly * row;
  }
  return acc;
}

}  // namespace qesurf
