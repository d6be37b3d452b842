#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qesurf/ew.hpp"
#include "qesurf/solutions.hpp"

using namespace qesurf;

namespace {

std::shared_ptr<ChartGrid> sphere_chart(int n = 129, double r = 1.0) {
  return std::make_shared<ChartGrid>(-r, r, -r, r, n, n);
}

WeylFrame sample_frame(std::shared_ptr<const ChartGrid> g) {
  WeylFrame f;
  ArrR H(g->nx(), g->ny());
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i)
      H(i, j) = 0.2 * g->x(i) + 0.1 * g->y(j) * g->y(j);
  f.g = conformal_metric(g, H);
  f.omega = make_oneform(g, [](double x, double y) { return Complex(std::sin(x) * y, 0); },
                         [](double x, double y) { return Complex(std::cos(x + y), 0); });
  f.omega_t = constant_field(g, 0.0);
  f.Lambda = make_field(g, [](double x, double y) { return Complex(1.0 + 0.3 * x * y, 0); });
  f.log_gtt = constant_field(g, 0.0);
  f.n = 3;
  return f;
}

ScalarField smooth_u(std::shared_ptr<const ChartGrid> g, double ax, double ay) {
  return make_field(g, [=](double x, double y) {
    return Complex(0.3 * std::sin(ax * x) * std::cos(ay * y), 0);
  });
}

}  // namespace

TEST_CASE("frame changes") {
  auto g = std::make_shared<ChartGrid>(0.0, 1.0, 0.0, 1.0, 49, 49);
  WeylFrame f = sample_frame(g);

  SUBCASE("u = 0 is the identity") {
    WeylFrame f2 = frame_change(f, constant_field(g, 0.0));
    CHECK(sup_over((f2.g.gxx - f.g.gxx).abs(), g->interior(0)) < 1e-13);
    CHECK(sup_over((f2.omega.ax - f.omega.ax).abs(), g->interior(0)) < 1e-12);
    CHECK(sup_over((f2.Lambda.v - f.Lambda.v).abs(), g->interior(0)) < 1e-11);
  }

  SUBCASE("constant u rescales Lambda by e^{-u} and keeps omega") {
    const double k = 0.7;
    WeylFrame f2 = frame_change(f, constant_field(g, k));
    CHECK(sup_over((f2.omega.ax - f.omega.ax).abs(), g->interior(0)) < 1e-11);
    CHECK(sup_over((f2.Lambda.v - std::exp(-k) * f.Lambda.v).abs(), g->interior(2)) < 1e-11);
    CHECK(sup_over((f2.g.gxx - std::exp(k) * f.g.gxx).abs(), g->interior(0)) < 1e-12);
  }

  SUBCASE("changes compose additively") {
    ScalarField u1 = smooth_u(g, 1.3, 0.7), u2 = smooth_u(g, 0.4, 1.9);
    WeylFrame chained = frame_change(frame_change(f, u1), u2);
    WeylFrame direct = frame_change(f, ScalarField{g, u1.v + u2.v});
    CHECK(sup_over((chained.g.gxx - direct.g.gxx).abs(), g->interior(2)) < 1e-11);
    CHECK(sup_over((chained.omega.ax - direct.omega.ax).abs(), g->interior(2)) < 1e-10);
    CHECK(sup_over((chained.omega.ay - direct.omega.ay).abs(), g->interior(2)) < 1e-10);
    CHECK(sup_over((chained.Lambda.v - direct.Lambda.v).abs(), g->interior(2)) < 1e-9);
  }

  SUBCASE("a change followed by its inverse restores the frame") {
    ScalarField u = smooth_u(g, 1.1, 1.4);
    ScalarField mu{g, -u.v};
    WeylFrame back = frame_change(frame_change(f, u), mu);
    CHECK(sup_over((back.g.gxx - f.g.gxx).abs(), g->interior(2)) < 1e-11);
    CHECK(sup_over((back.Lambda.v - f.Lambda.v).abs(), g->interior(2)) < 1e-9);
  }
}

TEST_CASE("Moebius conformal factors") {
  auto g = sphere_chart();

  SUBCASE("identity map gives the constant 1/lambda") {
    ScalarField u = mobius_u(MobiusMap::identity(), 2.0, g);
    CHECK(sup_over((u.v - Complex(std::log(0.5), 0)).abs(), g->interior(0)) < 1e-13);
    CHECK(constcurv_residual(u, 2.0).sup < 1e-11);
  }

  SUBCASE("z -> 2z solves the curvature condition") {
    ScalarField u = mobius_u(MobiusMap::scaling(2.0), 1.0, g);
    for (int q : {10, 31, 52}) {
      double x = g->x(q), y = g->y(q);
      double r2 = x * x + y * y;
      double expect = std::pow((1.0 + r2) * 2.0 / (1.0 + 4.0 * r2), 2);
      CHECK(std::abs(std::exp(u.v(q, q).real()) - expect) < 1e-12);
    }
    CHECK(constcurv_residual(u, 1.0).sup < 1e-8);
  }

  SUBCASE("inversion is an isometry, and works on a masked annulus") {
    int n = 65;
    auto gfull = std::make_shared<ChartGrid>(-2.2, 2.2, -2.2, 2.2, n, n);
    ArrB mask(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double r = std::hypot(gfull->x(i), gfull->y(j));
        mask(i, j) = r > 0.5 && r < 2.0;
      }
    auto ga = std::make_shared<ChartGrid>(-2.2, 2.2, -2.2, 2.2, n, n, mask);
    ScalarField u = mobius_u(MobiusMap::inversion(), 1.0, ga);
    CHECK(constcurv_residual(u, 1.0).sup < 1e-8);
  }

  SUBCASE("non-solutions are detected") {
    ScalarField u = constant_field(g, 0.0);
    ResidualReport r = constcurv_residual(u, 2.0);
    CHECK(r.sup == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("factors compose with the group law") {
    MobiusMap f1 = MobiusMap::scaling(2.0);
    MobiusMap f2(Complex(1, 0), Complex(0.3, 0.1), Complex(0, 0), Complex(1, 0));
    MobiusMap comp = f1.compose(f2);
    const double lambda = 1.3;
    for (double xr : {-0.8, 0.1, 0.9}) {
      Complex z(xr, 0.2 * xr + 0.1);
      double lhs = mobius_u_value(comp, lambda, z);
      double rhs = mobius_u_value(f1, lambda, f2(z)) + mobius_u_value(f2, lambda, z)
                 + std::log(lambda);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
  }

  SUBCASE("json round trip") {
    MobiusMap f(Complex(2, 0), Complex(0, 1), Complex(0, 0), Complex(1, 0));
    MobiusMap f2 = MobiusMap::from_json(f.to_json());
    CHECK(std::abs(f2.a - f.a) < 1e-15);
    CHECK(std::abs(f2.b - f.b) < 1e-15);
  }
}

TEST_CASE("Kazdan-Warner type residual") {
  auto g = sphere_chart();
  Metric2D g0 = round_sphere_metric(g);

  SUBCASE("sphere solutions satisfy it with Lambda = 1 and K = 0") {
    ScalarField u = mobius_u(MobiusMap::scaling(2.0), 1.0, g);
    OneForm zero(g);
    ResidualReport r = kw_residual(u, constant_field(g, 1.0), 1.0, zero, g0);
    CHECK(r.sup < 1e-8);
  }

  SUBCASE("constants with matched Lambda are exact for any K") {
    ScalarField u = constant_field(g, 0.4);
    ScalarField lam{g, Complex(1.3, 0) * u.v.exp()};
    OneForm k = make_oneform(g, [](double, double y) { return Complex(y, 0); },
                             [](double x, double) { return Complex(-x, 0); });
    ResidualReport r = kw_residual(u, lam, 1.3, k, g0);
    CHECK(r.sup < 1e-11);
  }

  SUBCASE("perturbations are detected") {
    ScalarField u0 = mobius_u(MobiusMap::scaling(2.0), 1.0, g);
    ScalarField up = make_field(g, [&](double x, double y) {
      return Complex(mobius_u_value(MobiusMap::scaling(2.0), 1.0, Complex(x, y))
                     + 0.1 * std::sin(x), 0);
    });
    ResidualReport r = kw_residual(up, constant_field(g, 1.0), 1.0, OneForm(g), g0);
    CHECK(r.sup > 0.05);
    (void)u0;
  }
}

TEST_CASE("the Gauduchon-to-adapted frame change has constant Lambda") {
  auto g = sphere_chart(65);
  WeylFrame gauduchon;
  gauduchon.g = round_sphere_metric(g);
  gauduchon.omega = OneForm(g);  // the Killing dual points along the fiber
  gauduchon.omega_t = constant_field(g, 2.0);
  gauduchon.Lambda = constant_field(g, 1.0);
  gauduchon.log_gtt = constant_field(g, 0.0);
  gauduchon.n = 3;

  const double lambda = 1.0;
  ScalarField u = mobius_u(MobiusMap::scaling(2.0), lambda, g);
  WeylFrame qe = frame_change(gauduchon, u);
  double dev = sup_over((qe.Lambda.v - Complex(lambda, 0)).abs(), g->interior(2));
  CHECK(dev < 1e-7);
}

TEST_CASE("scaled product structures") {
  auto g = sphere_chart(257);

  SUBCASE("the identity map gives the untwisted product") {
    WarpedStructure3D w = s2xs1_structure(MobiusMap::identity(), 1.0, g);
    CHECK(sup_over(w.u.v.abs(), g->interior(0)) < 1e-13);
    Metric2D base = w.base_metric();
    Metric2D round = round_sphere_metric(g);
    CHECK(sup_over((base.gxx - round.gxx).abs(), g->interior(0)) < 1e-13);
    CHECK(sup_over(w.xflat_2d().ax.abs(), g->interior(0)) < 1e-12);
  }

  SUBCASE("twisted products pass all three residual blocks") {
    WarpedStructure3D w = s2xs1_structure(MobiusMap::scaling(2.0), 1.0, g);
    WarpedResiduals r = warped_residual(w);
    CHECK(r.tangential.sup < 1e-7);
    CHECK(r.fiber.sup < 1e-7);
    CHECK(r.potential.sup < 1e-7);
  }

  SUBCASE("the reduced base satisfies the field equations with shifted parameters") {
    // base vector field ((m+1)/m) du with parameters (m+1, lambda)
    WarpedStructure3D w = s2xs1_structure(MobiusMap::scaling(2.0), 1.0, g);
    WarpedProductSpec spec = to_normal_form(w);
    OneForm xn(g);
    double coeff = (spec.m + 1.0) / spec.m;  // zero here: the base is Einstein
    xn.ax = coeff * diff(spec.u, Axis::X, 1).v;
    xn.ay = coeff * diff(spec.u, Axis::Y, 1).v;
    QEStructure base = general_structure(spec.g_base, xn);
    QEEResidual r = qee_residual(base, QEParams(spec.m + 1.0 == 0.0 ? -1.0 : spec.m + 1.0,
                                                spec.lambda));
    // m+1 = 0 collapses the X-term, so any m works in the residual; the base
    // must simply be Einstein with the given lambda
    CHECK(sup_over(xn.ax.abs(), g->interior(0)) < 1e-14);
    CHECK(r.tensor.sup < 1e-7);
  }

  SUBCASE("constant-potential product with a matched Einstein base") {
    const double m = -2.0, lambda = 0.5;
    Metric2D round = round_sphere_metric(g);
    Metric2D base = conformal_metric(g, *round.H + std::log(1.0 / lambda));
    WarpedProductSpec spec{base, constant_field(g, 0.0), m, lambda};
    WarpedResiduals r = warped_residual(spec);
    CHECK(r.tangential.sup < 1e-8);
    CHECK(r.fiber.sup < 1e-9);
    CHECK(r.potential.sup < 1e-9);
  }

  SUBCASE("shifting the potential breaks only the scalar block") {
    WarpedStructure3D w = s2xs1_structure(MobiusMap::scaling(2.0), 1.0, g);
    WarpedProductSpec spec = to_normal_form(w);
    spec.u.v += Complex(0.3, 0.0);
    WarpedResiduals r = warped_residual(spec);
    CHECK(r.potential.sup > 0.1);
    CHECK(r.tangential.sup < 1e-7);
  }

  SUBCASE("normalization solves the shift back") {
    WarpedStructure3D w = s2xs1_structure(MobiusMap::scaling(2.0), 1.0, g);
    WarpedProductSpec spec = to_normal_form(w);
    spec.u.v += Complex(0.3, 0.0);
    WarpedResiduals r = warped_residual(spec, true);
    CHECK(r.u_shift == doctest::Approx(-0.3).epsilon(1e-5));
    CHECK(r.potential.sup < 1e-6);
  }

  SUBCASE("both presentations of one solution agree") {
    WarpedStructure3D w = s2xs1_structure(MobiusMap::scaling(2.0), 1.0, g);
    WarpedResiduals r1 = warped_residual(w);
    WarpedProductSpec spec;
    spec.g_base = conformal_metric(g, *round_sphere_metric(g).H + w.u.v.real());
    spec.u = ScalarField{g, 0.5 * w.u.v};
    spec.m = -1.0;
    spec.lambda = 1.0;
    WarpedResiduals r2 = warped_residual(spec);
    CHECK(r1.tangential.sup <= 10.0 * std::max(r2.tangential.sup, 1e-12));
    CHECK(r2.tangential.sup <= 10.0 * std::max(r1.tangential.sup, 1e-12));
    CHECK(r2.potential.sup <= 10.0 * std::max(r1.potential.sup, 1e-12));
  }
}

TEST_CASE("fiber Killing data on the scaled product") {
  auto g = sphere_chart();
  WarpedStructure3D w = s2xs1_structure(MobiusMap::scaling(2.0), 1.0, g);
  // Gamma = e^u: the 2D part of (2/m) Gamma X-flat + d Gamma cancels for m = -1
  ScalarField gam{g, w.u.v.exp()};
  OneForm x2d = w.xflat_2d();
  ArrC kx = -2.0 * gam.v * x2d.ax + diff(gam, Axis::X, 1).v;
  ArrC ky = -2.0 * gam.v * x2d.ay + diff(gam, Axis::Y, 1).v;
  CHECK(sup_over(kx.abs().max(ky.abs()), g->interior(2)) < 1e-7);
  // the fiber component -2 Gamma never vanishes
  CHECK(sup_over(gam.v.abs(), g->interior(0)) > 0.1);
}

TEST_CASE("the conserved quantity on the reduced base equals one") {
  auto g = sphere_chart();
  WarpedStructure3D w = s2xs1_structure(MobiusMap::scaling(2.0), 1.0, g);
  Metric2D base = w.base_metric();
  QEStructure s = general_structure(base, OneForm(g));
  KillingAnsatzData k{ScalarField{g, w.u.v.exp()}, OneForm(g)};
  GauduchonConstant a = gauduchon_constant(s, k, 0.0, 1.0);
  CHECK(a.mean == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(a.deviation < 1e-6);
}

TEST_CASE("horizon-equation patch from a Moebius factor") {
  auto g = sphere_chart(257);

  SUBCASE("the gradient patch satisfies the horizon equations with c = 1") {
    GehePatch patch = mobius_gehe_patch(MobiusMap::scaling(2.0), 1.0, g);
    ResidualReport r = gehe_residual(patch.structure, {patch.c, patch.Lambda});
    CHECK(r.sup < 1e-8);
  }

  SUBCASE("the twisted field is holomorphic on the patch") {
    GehePatch patch = mobius_gehe_patch(MobiusMap::scaling(2.0), 1.0, g);
    ResidualReport r = holomorphy_test(patch.structure, patch.c);
    CHECK(r.sup < 1e-7);
  }

  SUBCASE("an isometry factor gives vanishing X") {
    GehePatch patch = mobius_gehe_patch(MobiusMap::inversion(), 1.0, g);
    CHECK(sup_over(patch.structure.xflat.ax.abs(), g->interior(0)) < 1e-12);
    ResidualReport r = holomorphy_test(patch.structure, patch.c);
    CHECK(r.sup < 1e-12);
  }
}

TEST_CASE("indices over the two charts sum to the Euler characteristic") {
  auto g1 = std::make_shared<ChartGrid>(-1.5, 1.5, -1.5, 1.5, 97, 97);
  MobiusMap f = MobiusMap::scaling(2.0);

  ScalarField u1 = mobius_u(f, 1.0, g1);
  Metric2D m1 = conformal_metric(g1, *round_sphere_metric(g1).H + u1.v.real());
  OneForm x1(g1);
  x1.ax = 0.5 * diff(u1, Axis::X, 1).v;
  x1.ay = 0.5 * diff(u1, Axis::Y, 1).v;
  int i1 = zero_index(x1, m1, 0.0, 0.0, 0.6);

  auto g2 = std::make_shared<ChartGrid>(-1.5, 1.5, -1.5, 1.5, 97, 97);
  ScalarField u2 = mobius_u(f.second_patch(), 1.0, g2);
  Metric2D m2 = conformal_metric(g2, *round_sphere_metric(g2).H + u2.v.real());
  OneForm x2(g2);
  x2.ax = 0.5 * diff(u2, Axis::X, 1).v;
  x2.ay = 0.5 * diff(u2, Axis::Y, 1).v;
  int i2 = zero_index(x2, m2, 0.0, 0.0, 0.6);

  CHECK(i1 == 1);
  CHECK(i2 == 1);
  CHECK(i1 + i2 == 2);

  // the factor is a genuine function on the sphere: overlap values agree
  for (double r : {0.8, 1.2}) {
    Complex z(r, 0.3);
    Complex wc = 1.0 / z;
    CHECK(std::abs(mobius_u_value(f, 1.0, z) -
                   mobius_u_value(f.second_patch(), 1.0, wc)) < 1e-12);
  }
}
