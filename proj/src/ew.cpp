#include "qesurf/ew.hpp"

#include <cmath>

#include <json.hpp>

namespace qesurf {

WeylFrame frame_change(const WeylFrame& f, const ScalarField& u) {
  WeylFrame out = f;
  ArrR ur = u.v.real();
  ArrR factor = ur.exp();
  out.g.gxx = f.g.gxx * factor;
  out.g.gxy = f.g.gxy * factor;
  out.g.gyy = f.g.gyy * factor;
  if (f.g.gauge == Gauge::Conformal && f.g.H) out.g.H = *f.g.H + ur;
  out.omega.ax = f.omega.ax + diff(u, Axis::X, 1).v;
  out.omega.ay = f.omega.ay + diff(u, Axis::Y, 1).v;

  OneForm xflat(f.g.grid);
  const double half_nm2 = 0.5 * (f.n - 2);
  xflat.ax = half_nm2 * f.omega.ax;
  xflat.ay = half_nm2 * f.omega.ay;
  OneForm du(f.g.grid);
  du.ax = diff(u, Axis::X, 1).v;
  du.ay = diff(u, Axis::Y, 1).v;
  ArrC lxu = metric_pairing(f.g, xflat, du);
  // Laplacian of the product metric g + g_tt dt^2 on fiber-independent u
  ScalarField lap2 = laplacian(f.g, u);
  ArrC lap = lap2.v;
  if (f.log_gtt.grid) {
    OneForm ds(f.g.grid);
    ds.ax = diff(f.log_gtt, Axis::X, 1).v;
    ds.ay = diff(f.log_gtt, Axis::Y, 1).v;
    lap += 0.5 * metric_pairing(f.g, ds, du);
    out.log_gtt = ScalarField{f.g.grid, f.log_gtt.v + u.v};
  } else {
    out.log_gtt = u;
  }
  out.Lambda = ScalarField{f.g.grid, (-u.v).exp() * (f.Lambda.v - 0.5 * lap + 0.5 * lxu)};
  return out;
}

MobiusMap::MobiusMap(Complex a_, Complex b_, Complex c_, Complex d_)
    : a(a_), b(b_), c(c_), d(d_) {
  Complex det = a * d - b * c;
  if (std::abs(det) < 1e-300)
    throw ParameterError("Moebius map needs ad - bc != 0");
  Complex s = std::sqrt(det);
  a /= s; b /= s; c /= s; d /= s;
}

Complex MobiusMap::operator()(Complex z) const { return (a * z + b) / (c * z + d); }

Complex MobiusMap::derivative(Complex z) const {
  Complex q = c * z + d;
  return 1.0 / (q * q);
}

MobiusMap MobiusMap::compose(const MobiusMap& inner) const {
  return MobiusMap(a * inner.a + b * inner.c, a * inner.b + b * inner.d,
                   c * inner.a + d * inner.c, c * inner.b + d * inner.d);
}

MobiusMap MobiusMap::second_patch() const { return MobiusMap(d, c, b, a); }

MobiusMap MobiusMap::identity() { return MobiusMap(1, 0, 0, 1); }
MobiusMap MobiusMap::scaling(double k) {
  if (k == 0.0) throw ParameterError("scaling factor must be nonzero");
  return MobiusMap(k, 0, 0, 1);
}
MobiusMap MobiusMap::inversion() { return MobiusMap(0, 1, 1, 0); }

std::string MobiusMap::to_json() const {
  nlohmann::json j;
  j["a"] = {a.real(), a.imag()};
  j["b"] = {b.real(), b.imag()};
  j["c"] = {c.real(), c.imag()};
  j["d"] = {d.real(), d.imag()};
  return j.dump();
}

MobiusMap MobiusMap::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  auto read = [&](const char* key) {
    auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != 2) throw ParameterError("Moebius entries are [re, im] pairs");
    return Complex(v[0], v[1]);
  };
  return MobiusMap(read("a"), read("b"), read("c"), read("d"));
}

Metric2D round_sphere_metric(std::shared_ptr<const ChartGrid> grid) {
  ArrR H(grid->nx(), grid->ny());
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i) {
      double r2 = grid->x(i) * grid->x(i) + grid->y(j) * grid->y(j);
      H(i, j) = std::log(2.0) - 2.0 * std::log1p(r2);
    }
  return conformal_metric(grid, H);
}

double mobius_u_value(const MobiusMap& f, double lambda, Complex z) {
  double num = 1.0 + std::norm(z);
  double den = std::norm(f.a * z + f.b) + std::norm(f.c * z + f.d);
  if (den < 1e-300) throw DomainError("Moebius factor degenerates on the chart");
  double q = num / den;
  return std::log(q * q / lambda);
}

ScalarField mobius_u(const MobiusMap& f, double lambda,
                     std::shared_ptr<const ChartGrid> grid) {
  if (!(lambda > 0.0)) throw ParameterError("curvature scale lambda must be positive");
  return make_field(grid, [&](double x, double y) {
    return Complex(mobius_u_value(f, lambda, Complex(x, y)), 0.0);
  });
}

ResidualReport constcurv_residual(const ScalarField& u, double lambda) {
  auto grid = u.grid;
  ArrC lapflat = diff(u, Axis::X, 2).v + diff(u, Axis::Y, 2).v;
  ArrR pref(grid->nx(), grid->ny());
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i) {
      double r2 = grid->x(i) * grid->x(i) + grid->y(j) * grid->y(j);
      pref(i, j) = 0.25 * (1.0 + r2) * (1.0 + r2);
    }
  ArrC defect = pref.cast<Complex>() * lapflat - 2.0 + 2.0 * lambda * u.v.exp();
  return make_report("constcurv", defect.abs(), *grid);
}

ResidualReport kw_residual(const ScalarField& u, const ScalarField& Lambda,
                           double lambda, const OneForm& k_flat,
                           const Metric2D& g0) {
  ScalarField lap = laplacian(g0, u);
  OneForm du(u.grid);
  du.ax = diff(u, Axis::X, 1).v;
  du.ay = diff(u, Axis::Y, 1).v;
  ArrC lku = metric_pairing(g0, k_flat, du);
  ArrC defect = lap.v - 2.0 * Lambda.v - lku + 2.0 * lambda * u.v.exp();
  return make_report("kazdan_warner", defect.abs(), *u.grid);
}

Metric2D WarpedStructure3D::base_metric() const {
  Metric2D round = round_sphere_metric(grid);
  return conformal_metric(grid, *round.H + u.v.real());
}

OneForm WarpedStructure3D::xflat_2d() const {
  OneForm x(grid);
  x.ax = 0.5 * diff(u, Axis::X, 1).v;
  x.ay = 0.5 * diff(u, Axis::Y, 1).v;
  return x;
}

WarpedStructure3D s2xs1_structure(const MobiusMap& f, double lambda,
                                  std::shared_ptr<const ChartGrid> grid) {
  WarpedStructure3D w;
  w.grid = grid;
  w.u = mobius_u(f, lambda, grid);
  w.lambda = lambda;
  return w;
}

WarpedProductSpec to_normal_form(const WarpedStructure3D& w) {
  WarpedProductSpec spec;
  spec.g_base = w.base_metric();
  spec.u = ScalarField{w.grid, 0.5 * w.u.v};
  spec.m = -1.0;
  spec.lambda = w.lambda;
  return spec;
}

WarpedResiduals warped_residual(const WarpedProductSpec& spec_in,
                                bool normalize_shift) {
  const double m = spec_in.m, lam = spec_in.lambda;
  if (m == 0.0) throw ParameterError("warped residual needs m != 0");

  const WarpedProductSpec* spec = &spec_in;
  WarpedProductSpec shifted;
  WarpedResiduals out;
  auto grid = spec_in.g_base.grid;

  if (normalize_shift) {
    // exp(2s/m) mean(e^{2u/m}) = mean(lap u) - m lambda - (m+1)/m mean(|grad u|^2)
    ScalarField lap0 = laplacian(spec_in.g_base, spec_in.u);
    OneForm du0(grid);
    du0.ax = diff(spec_in.u, Axis::X, 1).v;
    du0.ay = diff(spec_in.u, Axis::Y, 1).v;
    ArrC grad20 = metric_pairing(spec_in.g_base, du0, du0);
    ArrB in = grid->interior(2);
    double mlap = 0, mgrad = 0, mexp = 0;
    long count = 0;
    for (int j = 0; j < grid->ny(); ++j)
      for (int i = 0; i < grid->nx(); ++i)
        if (in(i, j)) {
          mlap += lap0.v(i, j).real();
          mgrad += grad20(i, j).real();
          mexp += std::exp(2.0 * spec_in.u.v(i, j).real() / m);
          ++count;
        }
    mlap /= count; mgrad /= count; mexp /= count;
    double target = (mlap - m * lam - (m + 1.0) / m * mgrad) / mexp;
    if (!(target > 0.0))
      throw ConstraintError("no constant shift normalizes the potential equation");
    out.u_shift = 0.5 * m * std::log(target);
    shifted = spec_in;
    shifted.u.v += Complex(out.u_shift, 0.0);
    spec = &shifted;
  }

  const Metric2D& gN = spec->g_base;
  const ScalarField& u = spec->u;
  ScalarField RN = scalar_curvature(gN);
  SymTensor hess = hessian(gN, u);
  OneForm du(grid);
  du.ax = diff(u, Axis::X, 1).v;
  du.ay = diff(u, Axis::Y, 1).v;
  ArrC grad2 = metric_pairing(gN, du, du);
  ScalarField lap = laplacian(gN, u);

  ArrC gxx = gN.gxx.cast<Complex>(), gxy = gN.gxy.cast<Complex>(), gyy = gN.gyy.cast<Complex>();
  // base block: Ric(g_N) - du⊗du/m^2 + Hess/m  vs  du⊗du/m - Hess + lambda g_N
  auto block = [&](const ArrC& dud, const ArrC& hs, const ArrC& gc) -> ArrC {
    return 0.5 * RN.v * gc - dud / (m * m) + hs / m - (dud / m - hs + lam * gc);
  };
  ArrC txx = block(du.ax * du.ax, hess.xx, gxx);
  ArrC txy = block(du.ax * du.ay, hess.xy, gxy);
  ArrC tyy = block(du.ay * du.ay, hess.yy, gyy);
  out.tangential = make_report("warped_tangential",
                               txx.abs().max(txy.abs()).max(tyy.abs()), *grid);

  // tt block: (1/m) e^{-2u/m} (lap u - |grad u|^2 / m)
  //       vs  1/m + (1/m) e^{-2u/m} |grad u|^2 + lambda e^{-2u/m}
  ArrC einv = (-2.0 / m * u.v).exp();
  ArrC fib = einv / m * (lap.v - grad2 / m)
           - (1.0 / m + einv / m * grad2 + lam * einv);
  out.fiber = make_report("warped_fiber", fib.abs(), *grid);

  // scalar potential equation: lap u = m lambda + e^{2u/m} + (m+1)/m |grad u|^2
  ArrC pot = lap.v - m * lam - (2.0 / m * u.v).exp() - (m + 1.0) / m * grad2;
  out.potential = make_report("warped_potential", pot.abs(), *grid);
  return out;
}

WarpedResiduals warped_residual(const WarpedStructure3D& w) {
  return warped_residual(to_normal_form(w), false);
}

GehePatch mobius_gehe_patch(const MobiusMap& f, double lambda,
                            std::shared_ptr<const ChartGrid> grid) {
  ScalarField u = mobius_u(f, lambda, grid);
  Metric2D round = round_sphere_metric(grid);
  ArrR H = *round.H + u.v.real();

  // P = dz(u)/2, analytic through the quadratic denominator
  ArrC P(grid->nx(), grid->ny());
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i) {
      Complex z(grid->x(i), grid->y(j));
      Complex num = f.a * z + f.b, den = f.c * z + f.d;
      double D = std::norm(num) + std::norm(den);
      Complex dzu = 2.0 * std::conj(z) / (1.0 + std::norm(z))
                  - 2.0 * (f.a * std::conj(num) + f.c * std::conj(den)) / D;
      P(i, j) = 0.5 * dzu;
    }

  GehePatch patch{conformal_structure(grid, H, P), ScalarField{}, 2.0};

  ScalarField Pf{grid, P};
  ScalarField Pbar{grid, P.conjugate()};
  auto [dzPb, dzbPb] = wirtinger(Pbar);
  auto [dzP, dzbP] = wirtinger(Pf);
  ArrC lamf = -((-H).exp().cast<Complex>()) *
              (dzPb.v + dzbP.v + patch.c * P.abs2().cast<Complex>());
  patch.Lambda = ScalarField{grid, lamf};
  return patch;
}

}  // namespace qesurf
