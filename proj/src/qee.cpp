#include "qesurf/qee.hpp"

#include <cmath>

namespace qesurf {

namespace {

ArrR abs_max3(const ArrC& a, const ArrC& b, const ArrC& c) {
  return a.abs().max(b.abs()).max(c.abs());
}

}  // namespace

QEStructure conformal_structure(std::shared_ptr<const ChartGrid> grid,
                                const ArrR& H, const ArrC& P) {
  QEStructure s;
  s.grid = grid;
  s.gauge = Gauge::Conformal;
  s.H = H;
  s.P = P;
  s.g = conformal_metric(grid, H);
  s.xflat = OneForm(grid);
  // X-flat = P dz + conj(P) dzbar = 2 Re(P) dx - 2 Im(P) dy
  s.xflat.ax = (P + P.conjugate());
  const Complex I{0, 1};
  s.xflat.ay = I * (P - P.conjugate());
  return s;
}

QEStructure diagonal_structure(std::shared_ptr<const ChartGrid> grid,
                               const ArrR& U, double m) {
  if (m == 0.0) throw ParameterError("diagonal gauge needs nonzero m");
  ArrR dyU = diff(grid, U, Axis::Y, 1);
  if ((dyU <= 0.0).any() && !grid->masked())
    throw GeometryError("diagonal gauge requires dyU > 0");
  QEStructure s;
  s.grid = grid;
  s.gauge = Gauge::Diagonal;
  ArrR gxx = dyU * (-2.0 / m * U).exp();
  s.g = general_metric(grid, gxx, ArrR::Zero(grid->nx(), grid->ny()), dyU);
  s.g.gauge = Gauge::Diagonal;
  s.xflat = OneForm(grid);
  s.xflat.ay = dyU.cast<Complex>();
  return s;
}

QEStructure general_structure(Metric2D g, OneForm xflat) {
  QEStructure s;
  s.grid = g.grid;
  s.gauge = Gauge::General;
  s.g = std::move(g);
  s.xflat = std::move(xflat);
  return s;
}

namespace {

// L_X g in coordinates: X^c d_c g_ab + g_cb d_a X^c + g_ac d_b X^c.
struct LieDerivative {
  ArrC xx, xy, yy;
};

LieDerivative lie_metric(const QEStructure& s, const ArrC& vx, const ArrC& vy) {
  auto grid = s.grid;
  const Metric2D& g = s.g;
  ArrC gxx = g.gxx.cast<Complex>(), gxy = g.gxy.cast<Complex>(), gyy = g.gyy.cast<Complex>();
  ArrC dxvx = diff({grid, vx}, Axis::X, 1).v, dyvx = diff({grid, vx}, Axis::Y, 1).v;
  ArrC dxvy = diff({grid, vy}, Axis::X, 1).v, dyvy = diff({grid, vy}, Axis::Y, 1).v;
  ArrR dxgxx = diff(grid, g.gxx, Axis::X, 1), dygxx = diff(grid, g.gxx, Axis::Y, 1);
  ArrR dxgxy = diff(grid, g.gxy, Axis::X, 1), dygxy = diff(grid, g.gxy, Axis::Y, 1);
  ArrR dxgyy = diff(grid, g.gyy, Axis::X, 1), dygyy = diff(grid, g.gyy, Axis::Y, 1);

  LieDerivative L;
  L.xx = vx * dxgxx.cast<Complex>() + vy * dygxx.cast<Complex>() + 2.0 * (gxx * dxvx + gxy * dxvy);
  L.yy = vx * dxgyy.cast<Complex>() + vy * dygyy.cast<Complex>() + 2.0 * (gxy * dyvx + gyy * dyvy);
  L.xy = vx * dxgxy.cast<Complex>() + vy * dygxy.cast<Complex>()
       + gxx * dyvx + gxy * dyvy + gxy * dxvx + gyy * dxvy;
  return L;
}

}  // namespace

QEEResidual qee_residual(const QEStructure& s, const QEParams& p) {
  if (p.n != 2) throw ParameterError("qee_residual handles surfaces; 3D goes through the warped builders");
  auto grid = s.grid;
  const Metric2D& g = s.g;

  ScalarField R = scalar_curvature(g);
  auto [vx, vy] = raise(g, s.xflat);
  LieDerivative L = lie_metric(s, vx, vy);

  ArrC half_R = 0.5 * R.v;
  ArrC gxx = g.gxx.cast<Complex>(), gxy = g.gxy.cast<Complex>(), gyy = g.gyy.cast<Complex>();
  const double im = 1.0 / p.m;
  ArrC txx = half_R * gxx - im * s.xflat.ax * s.xflat.ax + 0.5 * L.xx - p.lambda * gxx;
  ArrC txy = half_R * gxy - im * s.xflat.ax * s.xflat.ay + 0.5 * L.xy - p.lambda * gxy;
  ArrC tyy = half_R * gyy - im * s.xflat.ay * s.xflat.ay + 0.5 * L.yy - p.lambda * gyy;

  QEEResidual out;
  out.tensor = make_report("qee", abs_max3(txx, txy, tyy), *grid);

  if (s.gauge == Gauge::Conformal && s.H && s.P &&
      std::abs(p.m + 1.0) < 1e-14 && std::abs(p.lambda) < 1e-14) {
    ScalarField Pf{grid, *s.P};
    ScalarField Hf{grid, s.H->cast<Complex>()};
    auto [dzP, dzbP] = wirtinger(Pf);
    auto [dzH, dzbH] = wirtinger(Hf);
    ScalarField Pbar{grid, s.P->conjugate()};
    auto [dzPb, dzbPb] = wirtinger(Pbar);
    ArrC lapH = 0.25 * (diff(Hf, Axis::X, 2).v + diff(Hf, Axis::Y, 2).v);  // dz dzbar H

    ArrC zz = dzP.v - *s.P * dzH.v + s.P->square();
    ArrC mixed = lapH - 0.5 * (dzPb.v + dzbP.v) - s.P->abs2().cast<Complex>();
    ArrC zbzb = dzbPb.v - s.P->conjugate() * dzbH.v + s.P->conjugate().square();
    out.conformal_scalars.push_back(make_report("qee_zz", zz.abs(), *grid));
    out.conformal_scalars.push_back(make_report("qee_mixed", mixed.abs(), *grid));
    out.conformal_scalars.push_back(make_report("qee_zbzb", zbzb.abs(), *grid));
  }
  return out;
}

ResidualReport gehe_residual(const QEStructure& s, const GEHEParams& gp) {
  if (gp.c == 0.0) throw ParameterError("GEHE constant c must be nonzero");
  auto grid = s.grid;
  auto [vx, vy] = raise(s.g, s.xflat);
  LieDerivative L = lie_metric(s, vx, vy);
  ArrC lam = gp.Lambda.v;
  ArrC txx = L.xx + gp.c * s.xflat.ax * s.xflat.ax + lam * s.g.gxx.cast<Complex>();
  ArrC txy = L.xy + gp.c * s.xflat.ax * s.xflat.ay + lam * s.g.gxy.cast<Complex>();
  ArrC tyy = L.yy + gp.c * s.xflat.ay * s.xflat.ay + lam * s.g.gyy.cast<Complex>();
  return make_report("gehe", abs_max3(txx, txy, tyy), *grid);
}

ProlongedState prolong(const QEStructure& s) {
  ProlongedState st;
  st.xflat = s.xflat;
  st.g = s.g;
  st.omega = star_d(s.xflat, s.g);
  st.R = scalar_curvature(s.g);
  return st;
}

ProlongationResiduals prolongation_residuals(const ProlongedState& st, const QEParams& p) {
  // The constraint block differentiates R three levels deep; wide windows
  // keep the nested error below the amplification threshold.
  StencilWidthGuard wide(13);
  auto grid = st.g.grid;
  const Metric2D& g = st.g;
  const double m = p.m, lam = p.lambda;

  ScalarField Rwide = scalar_curvature(g);

  ArrC gxx = g.gxx.cast<Complex>(), gxy = g.gxy.cast<Complex>(), gyy = g.gyy.cast<Complex>();
  ArrC vol = g.det().sqrt().cast<Complex>();
  const ArrC& R = Rwide.v;
  const ArrC& om = st.omega.v;
  const OneForm& X = st.xflat;

  // nabla X - ( Xb⊗Xb/m + (lambda - R/2) g + (Omega/2) vol )
  CovariantOneForm n = covariant_derivative(g, X);
  ArrC common = (lam - 0.5 * R);
  ArrC rxx = n.xx - (X.ax * X.ax / m + common * gxx);
  ArrC rxy = n.xy - (X.ax * X.ay / m + common * gxy + 0.5 * om * vol);
  ArrC ryx = n.yx - (X.ay * X.ax / m + common * gxy - 0.5 * om * vol);
  ArrC ryy = n.yy - (X.ay * X.ay / m + common * gyy);
  ArrR grad_abs = rxx.abs().max(rxy.abs()).max(ryx.abs()).max(ryy.abs());

  // dOmega - ( 3/m Omega Xb + star dR + (2 lambda - (m+1) R)/m star Xb ).
  // The reduction couples the rotation on 1-forms to d X-flat with the
  // opposite handedness to the chart orientation; validated on the
  // non-gradient families (gradient solutions cannot see this sign).
  OneForm dR(grid);
  dR.ax = diff(Rwide, Axis::X, 1).v;
  dR.ay = diff(Rwide, Axis::Y, 1).v;
  OneForm sdR = hodge_star(dR, g);
  sdR.ax = -sdR.ax; sdR.ay = -sdR.ay;
  OneForm sX = hodge_star(X, g);
  sX.ax = -sX.ax; sX.ay = -sX.ay;
  ArrC coef = (2.0 * lam - (m + 1.0) * R) / m;
  ArrC dom_x = diff(st.omega, Axis::X, 1).v - (3.0 / m * om * X.ax + sdR.ax + coef * sX.ax);
  ArrC dom_y = diff(st.omega, Axis::Y, 1).v - (3.0 / m * om * X.ay + sdR.ay + coef * sX.ay);
  ArrR domega_abs = dom_x.abs().max(dom_y.abs());

  // scalar constraint
  ScalarField lapR = laplacian(g, Rwide);
  ArrC xdr = metric_pairing(g, X, dR);
  ArrC x2 = metric_pairing(g, X, X);
  ArrC c1 = -lapR.v + (1.0 + 4.0 / m) * xdr + 3.0 / m * om.square()
          + (2.0 * lam - (m + 1.0) * R) * (2.0 * x2 - 2.0 * lam * m + m * R) / (m * m);

  // 1-form constraint
  SymTensor hR = hessian(g, Rwide);
  auto [xup, yup] = raise(g, X);
  ArrC hXx = xup * hR.xx + yup * hR.xy;
  ArrC hXy = xup * hR.xy + yup * hR.yy;
  OneForm dlapR(grid);
  dlapR.ax = diff(lapR, Axis::X, 1).v;
  dlapR.ay = diff(lapR, Axis::Y, 1).v;
  // the bracket multiplies dR; the m = -1 specialization of the system pins
  // this grouping
  ArrC bracket = -2.0 / m * (1.0 + 1.0 / m) * x2 - (2.5 + 4.0 / m) * R
               + lam * (3.0 + 8.0 / m);
  ArrC pref = 4.0 / (m * m) * (2.0 * lam - (m + 1.0) * R);
  ArrC tail = (lam - 0.5 * R);
  ArrC c2x = -dlapR.ax + (1.0 + 4.0 / m) / m * xdr * X.ax + (1.0 + 4.0 / m) * hXx
           + (0.5 + 8.0 / m) * om * sdR.ax + bracket * dR.ax + 18.0 / (m * m) * om.square() * X.ax
           + pref * (tail * X.ax + 2.0 * om * sX.ax + x2 * X.ax / m);
  ArrC c2y = -dlapR.ay + (1.0 + 4.0 / m) / m * xdr * X.ay + (1.0 + 4.0 / m) * hXy
           + (0.5 + 8.0 / m) * om * sdR.ay + bracket * dR.ay + 18.0 / (m * m) * om.square() * X.ay
           + pref * (tail * X.ay + 2.0 * om * sX.ay + x2 * X.ay / m);

  ProlongationResiduals out;
  out.closed_gradient = make_report("prolong_closed", grad_abs, *grid);
  out.closed_domega = make_report("prolong_domega", domega_abs, *grid);
  out.constraint_scalar = make_report("prolong_constraint_scalar", c1.abs(), *grid);
  out.constraint_oneform =
      make_report("prolong_constraint_oneform", c2x.abs().max(c2y.abs()), *grid);
  return out;
}

KillingAnsatzData killing_ansatz(const QEStructure& s, const ScalarField& gamma,
                                 const QEParams& p) {
  ArrR gre = gamma.v.real();
  ArrB valid = s.grid->interior(0);
  for (int j = 0; j < s.grid->ny(); ++j)
    for (int i = 0; i < s.grid->nx(); ++i)
      if (valid(i, j) && !(gre(i, j) > 0.0))
        throw ParameterError("Gamma must be positive on the chart");
  KillingAnsatzData k;
  k.gamma = gamma;
  k.kflat = OneForm(s.grid);
  k.kflat.ax = (2.0 / p.m) * gamma.v * s.xflat.ax + diff(gamma, Axis::X, 1).v;
  k.kflat.ay = (2.0 / p.m) * gamma.v * s.xflat.ay + diff(gamma, Axis::Y, 1).v;
  return k;
}

ResidualReport identity_residual(const QEStructure& s, const KillingAnsatzData& k,
                                 const QEParams& p) {
  if (std::abs(p.m - 2.0) < 1e-12)
    throw ParameterError("the divergence identity needs m != 2");
  auto grid = s.grid;
  const Metric2D& g = s.g;
  const double m = p.m, lam = p.lambda;

  InverseMetric inv = inverse_metric(g);
  ArrC ixx = inv.ixx.cast<Complex>(), ixy = inv.ixy.cast<Complex>(), iyy = inv.iyy.cast<Complex>();

  CovariantOneForm nk = covariant_derivative(g, k.kflat);
  ArrC sxx = nk.xx, syy = nk.yy, sxy = 0.5 * (nk.xy + nk.yx);

  // raise both indices of the symmetrized derivative
  ArrC uxx = ixx * (ixx * sxx + ixy * sxy) + ixy * (ixx * sxy + ixy * syy);
  ArrC uxy = ixx * (ixy * sxx + iyy * sxy) + ixy * (ixy * sxy + iyy * syy);
  ArrC uyy = ixy * (ixy * sxx + iyy * sxy) + iyy * (ixy * sxy + iyy * syy);

  ArrC contraction = sxx * uxx + 2.0 * sxy * uxy + syy * uyy;
  ArrC divK = ixx * nk.xx + ixy * (nk.xy + nk.yx) + iyy * nk.yy;

  ArrC gam = k.gamma.v;
  ArrC gpow = gam.pow(0.5 * m - 1.0);
  ArrC lhs = gpow * contraction + gpow * divK.square() / (m - 2.0);

  OneForm dG(grid);
  dG.ax = diff(k.gamma, Axis::X, 1).v;
  dG.ay = diff(k.gamma, Axis::Y, 1).v;
  ArrC grad2 = metric_pairing(g, dG, dG);
  ScalarField lapG = laplacian(g, k.gamma);
  auto [kx, ky] = raise(g, k.kflat);
  ArrC k2 = metric_pairing(g, k.kflat, k.kflat);

  // K_b nabla^{(a} K^{b)}
  ArrC kb_x = uxx * k.kflat.ax + uxy * k.kflat.ay;
  ArrC kb_y = uxy * k.kflat.ax + uyy * k.kflat.ay;

  ArrC gpow2 = gam.pow(0.5 * m - 2.0);
  ArrC wx = gpow * kb_x - 0.25 * (m - 2.0) * grad2 * gpow2 * kx
          - 0.5 * gpow * divK * kx - 0.5 * gpow * lapG.v * kx - lam * gam.pow(0.5 * m) * kx;
  ArrC wy = gpow * kb_y - 0.25 * (m - 2.0) * grad2 * gpow2 * ky
          - 0.5 * gpow * divK * ky - 0.5 * gpow * lapG.v * ky - lam * gam.pow(0.5 * m) * ky;
  ScalarField divW = divergence(g, wx, wy);

  ScalarField divGK = divergence(g, gpow * kx, gpow * ky);
  ArrC S = -k2 / (2.0 * gam) + 0.5 * lapG.v + 0.25 * (m - 2.0) * grad2 / gam
         + m / (2.0 * (m - 2.0)) * divK + lam * gam;

  ArrC defect = lhs - divW.v - divGK.v * S;
  return make_report("divergence_identity", defect.abs(), *grid);
}

GauduchonConstant gauduchon_constant(const QEStructure& s, const KillingAnsatzData& k,
                                     double m, double lambda) {
  auto grid = s.grid;
  const Metric2D& g = s.g;
  ArrC gam = k.gamma.v;
  ArrC k2 = metric_pairing(g, k.kflat, k.kflat);

  // precondition: K vanishes, or K is Killing with L_K Gamma = 0
  double kscale = sup_over(k.kflat.ax.abs().max(k.kflat.ay.abs()), grid->interior(2));
  if (kscale > 1e-8) {
    auto [kx, ky] = raise(g, k.kflat);
    QEStructure tmp = general_structure(g, k.kflat);
    LieDerivative L = lie_metric(tmp, kx, ky);
    double lknorm = sup_over(abs_max3(L.xx, L.xy, L.yy), grid->interior(2));
    ArrC lkg = kx * diff(k.gamma, Axis::X, 1).v + ky * diff(k.gamma, Axis::Y, 1).v;
    double lkgam = sup_over(lkg.abs(), grid->interior(2));
    double scale = std::max(1.0, kscale);
    if (lknorm > 1e-6 * scale || lkgam > 1e-6 * scale)
      throw ContractError("K is neither zero nor a Killing vector preserving Gamma");
  }

  OneForm dG(grid);
  dG.ax = diff(k.gamma, Axis::X, 1).v;
  dG.ay = diff(k.gamma, Axis::Y, 1).v;
  ArrC grad2 = metric_pairing(g, dG, dG);
  ScalarField lapG = laplacian(g, k.gamma);

  GauduchonConstant out;
  out.A = ScalarField{grid, -k2 / (2.0 * gam) + 0.5 * lapG.v + lambda * gam
                              + (m - 2.0) / 4.0 * grad2 / gam};
  ArrB in = grid->interior(2);
  double sum = 0.0;
  long count = 0;
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i)
      if (in(i, j)) {
        sum += out.A.v(i, j).real();
        ++count;
      }
  out.mean = count ? sum / count : 0.0;
  out.deviation = sup_over((out.A.v - Complex(out.mean, 0)).abs(), in);
  return out;
}

int zero_index(const OneForm& xflat, const Metric2D& g,
               double cx, double cy, double radius, int samples) {
  if (samples < 256) samples = 256;
  auto [vx, vy] = raise(g, xflat);
  ScalarField fx{xflat.grid, vx}, fy{xflat.grid, vy};
  double prev = 0.0, total = 0.0;
  for (int k = 0; k <= samples; ++k) {
    double phi = 2.0 * kPi * k / samples;
    double x = cx + radius * std::cos(phi);
    double y = cy + radius * std::sin(phi);
    double ux = sample(fx, x, y).real();
    double uy = sample(fy, x, y).real();
    double norm = std::hypot(ux, uy);
    if (norm < 1e-13)
      throw DomainError("vector field vanishes on the sampling circle");
    double ang = std::atan2(uy, ux);
    if (k > 0) {
      double d = ang - prev;
      while (d > kPi) d -= 2.0 * kPi;
      while (d < -kPi) d += 2.0 * kPi;
      total += d;
    }
    prev = ang;
  }
  double w = total / (2.0 * kPi);
  long idx = std::lround(w);
  if (std::abs(w - idx) > 0.1)
    throw AccuracyError("winding number is not near an integer; refine the sampling");
  return static_cast<int>(idx);
}

ResidualReport holomorphy_test(const QEStructure& s, double c) {
  if (s.gauge != Gauge::Conformal || !s.H || !s.P)
    throw GaugeError("holomorphy test needs a conformal structure");
  if (s.grid->masked())
    throw DomainError("holomorphy test needs a simply connected unmasked chart");
  auto grid = s.grid;

  // X-flat must be closed for the path integral to define F
  ScalarField dX = d_of_oneform(s.xflat);
  double scale = std::max(1.0, sup_over(s.xflat.ax.abs().max(s.xflat.ay.abs()),
                                        grid->interior(2)));
  if (sup_over(dX.v.abs(), grid->interior(2)) > 1e-8 * scale)
    throw DomainError("X-flat is not closed; no single-valued potential exists");

  ScalarField F = potential_from_oneform(s.xflat, grid->nx() / 2, grid->ny() / 2, 0.0);
  ArrC G = (0.5 * c * F.v - s.H->cast<Complex>()).exp() * s.P->conjugate();
  auto [dzG, dzbG] = wirtinger({grid, G});
  return make_report("holomorphy", dzbG.v.abs(), *grid);
}

}  // namespace qesurf
