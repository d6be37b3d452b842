#include "qesurf/hyp.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace qesurf {

namespace {

constexpr double kSeriesTol = 1e-14;
constexpr int kSeriesMaxTerms = 500;

}  // namespace

HypValue eval_3f2_with_derivatives(const SeriesSpec& spec) {
  const Complex z = spec.z;
  if (std::abs(z) >= 1.0 && !(std::abs(z.imag()) < 1e-14 && z.real() > 1.0))
    throw DomainError("series evaluation needs |z| < 1 or real z > 1");

  if (std::abs(z) < 1.0) {
    // direct series; coefficient recurrence shared by the derivative sums
    Complex a1 = spec.a1, a2 = spec.a2, a3 = spec.a3, b1 = spec.b1, b2 = spec.b2;
    Complex coeff{1.0, 0.0};   // c_n = (a1)_n (a2)_n (a3)_n / ((b1)_n (b2)_n n!)
    Complex f{1.0, 0.0}, df{0, 0}, d2f{0, 0}, d3f{0, 0};
    Complex zp0{1.0, 0.0};     // z^n
    Complex zp1{0, 0}, zp2{0, 0}, zp3{0, 0};  // z^{n-1}, z^{n-2}, z^{n-3}
    for (int n = 0; n < kSeriesMaxTerms; ++n) {
      Complex num = (a1 + double(n)) * (a2 + double(n)) * (a3 + double(n));
      if (std::abs(num) == 0.0) return {f, df, d2f, d3f};  // terminating series
      Complex den = (b1 + double(n)) * (b2 + double(n)) * double(n + 1);
      if (std::abs(den) == 0.0)
        throw ParameterError("lower parameter hits a nonpositive integer before the series terminates");
      coeff *= num / den;
      double nn = n + 1;
      zp3 = zp2;
      zp2 = zp1;
      zp1 = zp0;
      zp0 *= z;
      Complex term = coeff * zp0;
      Complex t1 = coeff * nn * zp1;
      Complex t2 = coeff * nn * (nn - 1.0) * zp2;
      Complex t3 = coeff * nn * (nn - 1.0) * (nn - 2.0) * zp3;
      f += term;
      df += t1;
      if (nn >= 2) d2f += t2;
      if (nn >= 3) d3f += t3;
      double rel = std::abs(term) / (std::abs(f) + 1e-300);
      rel = std::max(rel, std::abs(t1) / (std::abs(df) + 1e-300));
      rel = std::max(rel, std::abs(t2) / (std::abs(d2f) + 1e-300));
      rel = std::max(rel, std::abs(t3) / (std::abs(d3f) + 1e-300));
      if (rel < kSeriesTol && n > 5) return {f, df, d2f, d3f};
    }
    throw AccuracyError("series did not converge within 500 terms");
  }

  // real z > 1: integrate the hypergeometric ODE from z = 1/2 along a path
  // indented into the lower half-plane around z = 1
  SeriesSpec half = spec;
  half.z = Complex(0.5, 0.0);
  HypValue y0 = eval_3f2_with_derivatives(half);

  const Complex B1 = spec.b1 - 1.0, B2 = spec.b2 - 1.0;
  const Complex e1 = spec.a1 + spec.a2 + spec.a3;
  const Complex e2 = spec.a1 * spec.a2 + spec.a1 * spec.a3 + spec.a2 * spec.a3;
  const Complex e3 = spec.a1 * spec.a2 * spec.a3;

  auto rhs = [&](Complex zz, const Eigen::Vector3cd& y) {
    Complex denom = zz * zz * zz * (1.0 - zz);
    Complex c2 = zz * zz * ((3.0 + B1 + B2) - zz * (3.0 + e1));
    Complex c1 = zz * ((1.0 + B1 + B2 + B1 * B2) - zz * (1.0 + e1 + e2));
    Complex c0 = -zz * e3;
    Eigen::Vector3cd dy;
    dy[0] = y[1];
    dy[1] = y[2];
    dy[2] = -(c2 * y[2] + c1 * y[1] + c0 * y[0]) / denom;
    return dy;
  };

  // piecewise-linear path through the lower half-plane
  const double eta = 0.75;
  std::vector<Complex> waypoints{Complex(0.5, 0.0), Complex(0.5, -eta),
                                 Complex(z.real(), -eta), Complex(z.real(), 0.0)};
  Eigen::Vector3cd y{y0.f, y0.df, y0.d2f};
  for (size_t seg = 0; seg + 1 < waypoints.size(); ++seg) {
    Complex za = waypoints[seg], zb = waypoints[seg + 1];
    Complex dz = zb - za;
    // adaptive Dormand-Prince on the segment parameter
    auto frhs = [&](double t, const Eigen::Vector3cd& u) {
      return (rhs(za + t * dz, u) * dz).eval();
    };
    double t = 0.0, h = 0.1;
    const double rtol = 1e-12, atol = 1e-14;
    int steps = 0;
    while (t < 1.0) {
      if (t + h > 1.0) h = 1.0 - t;
      Eigen::Vector3cd k1 = frhs(t, y);
      Eigen::Vector3cd k2 = frhs(t + h / 5.0, y + h * (k1 / 5.0));
      Eigen::Vector3cd k3 = frhs(t + 3.0 * h / 10.0, y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
      Eigen::Vector3cd k4 = frhs(t + 4.0 * h / 5.0,
                                 y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
      Eigen::Vector3cd k5 = frhs(t + 8.0 * h / 9.0,
                                 y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                                          64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
      Eigen::Vector3cd k6 = frhs(t + h,
                                 y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                                          46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                                          5103.0 / 18656.0 * k5));
      Eigen::Vector3cd y5 = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                                     125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
      Eigen::Vector3cd k7 = frhs(t + h, y5);
      Eigen::Vector3cd y4 = y + h * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 +
                                     393.0 / 640.0 * k4 - 92097.0 / 339200.0 * k5 +
                                     187.0 / 2100.0 * k6 + k7 / 40.0);
      double err = 0.0;
      for (int c = 0; c < 3; ++c) {
        double sc = atol + rtol * std::max(std::abs(y[c]), std::abs(y5[c]));
        err = std::max(err, std::abs(y5[c] - y4[c]) / sc);
      }
      if (err <= 1.0) {
        t += h;
        y = y5;
      }
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h *= std::clamp(fac, 0.2, 5.0);
      if (++steps > 100000) throw AccuracyError("path integration did not converge");
    }
  }
  Eigen::Vector3cd dy = rhs(Complex(z.real(), 0.0), y);
  return {y[0], y[1], y[2], dy[2]};
}

Complex eval_3f2(const SeriesSpec& spec) { return eval_3f2_with_derivatives(spec).f; }

namespace {

// basis member: z^sigma * 3F2(a; b; z) with value and two z-derivatives
HypValue prefactored(Complex sigma, const SeriesSpec& spec) {
  HypValue F = eval_3f2_with_derivatives(spec);
  Complex z = spec.z;
  Complex zs = std::pow(z, sigma);
  HypValue out;
  out.f = zs * F.f;
  out.df = zs / z * (sigma * F.f + z * F.df);
  out.d2f = zs / (z * z) *
            (sigma * (sigma - 1.0) * F.f + 2.0 * sigma * z * F.df + z * z * F.d2f);
  out.d3f = zs / (z * z * z) *
            (sigma * (sigma - 1.0) * (sigma - 2.0) * F.f +
             3.0 * sigma * (sigma - 1.0) * z * F.df +
             3.0 * sigma * z * z * F.d2f + z * z * z * F.d3f);
  return out;
}

Complex sqrt_nu(Complex nu) {
  if (std::abs(nu.imag()) < 1e-14 && nu.real() < 0.0)
    return Complex(0.0, std::sqrt(-nu.real()));
  return std::sqrt(nu);
}

}  // namespace

BasisValues hyp_basis(Complex nu, Complex z) {
  if (std::abs(nu) < 1e-300)
    throw ParameterError("nu = 0 needs the Meijer-G regime, which is unsupported");
  Complex s = sqrt_nu(nu);
  if (std::abs(s.imag()) < 1e-12) {
    double two_s = 2.0 * s.real();
    if (std::abs(two_s - std::round(two_s)) < 1e-12 &&
        std::lround(two_s) % 2 != 0)
      throw ParameterError("half-integer sqrt(nu) needs the Meijer-G regime, which is unsupported");
  }

  BasisValues out;
  {
    SeriesSpec c1{Complex(-0.5), Complex(-0.5), Complex(0.5),
                  0.5 - s, 0.5 + s, z};
    HypValue v = prefactored(Complex(-0.5), c1);
    out.C[0] = v.f; out.Cp[0] = v.df; out.Cpp[0] = v.d2f; out.Cppp[0] = v.d3f;
  }
  {
    SeriesSpec c2{s, s, 1.0 + s, 1.0 + 2.0 * s, 1.5 + s, z};
    HypValue v = prefactored(s, c2);
    out.C[1] = v.f; out.Cp[1] = v.df; out.Cpp[1] = v.d2f; out.Cppp[1] = v.d3f;
  }
  {
    SeriesSpec c3{-s, -s, 1.0 - s, 1.0 - 2.0 * s, 1.5 - s, z};
    HypValue v = prefactored(-s, c3);
    out.C[2] = v.f; out.Cp[2] = v.df; out.Cpp[2] = v.d2f; out.Cppp[2] = v.d3f;
  }
  return out;
}

Complex hyp_constraint(const HypParams& p) {
  if (p.alpha == 0.0)
    throw ParameterError("alpha = 0 sits in the unsupported Meijer-G regime");
  double nu = 1.0 / p.alpha;
  return -0.25 * p.beta * p.beta + 4.0 * nu * (1.0 - 4.0 * nu) * p.gamma * p.delta;
}

HypParams find_real_coefficients(double alpha, double beta, double z_anchor) {
  if (alpha == 0.0) throw ParameterError("alpha = 0 is unsupported");
  double nu = 1.0 / alpha;
  BasisValues bv = hyp_basis(Complex(nu, 0), Complex(z_anchor, 0));

  // Im(beta C1 + gamma C2 + delta C3) = 0 and the same for the derivative:
  // two linear conditions on w = (Re g, Im g, Re d, Im d)
  Eigen::Matrix<double, 2, 4> A;
  Eigen::Vector2d rhs;
  A << bv.C[1].imag(), bv.C[1].real(), bv.C[2].imag(), bv.C[2].real(),
       bv.Cp[1].imag(), bv.Cp[1].real(), bv.Cp[2].imag(), bv.Cp[2].real();
  rhs << -beta * bv.C[0].imag(), -beta * bv.Cp[0].imag();

  Eigen::Matrix<double, 4, 1> w0 = A.fullPivLu().solve(rhs.matrix());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  Eigen::MatrixXd null = lu.kernel();  // 4 x k, expect k = 2
  if (null.cols() < 2) throw ConvergenceError("degenerate reality conditions");

  const double kq = 4.0 * nu * (1.0 - 4.0 * nu);
  auto gamma_delta = [&](const Eigen::Vector2d& t) {
    Eigen::Vector4d w = w0 + null.col(0) * t[0] + null.col(1) * t[1];
    return std::pair{Complex(w[0], w[1]), Complex(w[2], w[3])};
  };
  auto constraint_val = [&](const Eigen::Vector2d& t) {
    auto [g, d] = gamma_delta(t);
    return -0.25 * beta * beta + kq * g * d;
  };

  // Newton in the 2-parameter affine family
  Eigen::Vector2d t = Eigen::Vector2d::Constant(0.1);
  for (int iter = 0; iter < 80; ++iter) {
    Complex q = constraint_val(t);
    if (std::abs(q) < 1e-13) break;
    Eigen::Matrix2d J;
    const double hstep = 1e-7;
    for (int k = 0; k < 2; ++k) {
      Eigen::Vector2d tp = t;
      tp[k] += hstep;
      Complex qp = constraint_val(tp);
      J(0, k) = (qp.real() - q.real()) / hstep;
      J(1, k) = (qp.imag() - q.imag()) / hstep;
    }
    Eigen::Vector2d f(q.real(), q.imag());
    Eigen::Vector2d step = J.fullPivLu().solve(f);
    t -= step;
    if (iter == 79) throw ConvergenceError("reality matching did not converge");
  }
  auto [g, d] = gamma_delta(t);
  HypParams p;
  p.alpha = alpha;
  p.beta = Complex(beta, 0);
  p.gamma = g;
  p.delta = d;
  return p;
}

namespace {

void check_line(const Eigen::VectorXd& x, double alpha) {
  const int n = static_cast<int>(x.size());
  if (n < 9) throw StencilError("third-derivative stencils need at least 9 samples");
  double h = x[1] - x[0];
  for (int i = 1; i + 1 < n; ++i)
    if (std::abs((x[i + 1] - x[i]) - h) > 1e-9 * std::abs(h))
      throw DomainError("samples must be uniformly spaced");
  double lo = std::min(x[0], x[n - 1]), hi = std::max(x[0], x[n - 1]);
  for (double bad : {0.0, alpha})
    if (bad > lo - 0.5 * h && bad < hi + 0.5 * h)
      throw DomainError("sample range touches a singular point of the operator");
}

}  // namespace

ResidualReport dalpha_residual(const Eigen::VectorXcd& C, const Eigen::VectorXd& x,
                               double alpha) {
  check_line(x, alpha);
  double h = x[1] - x[0];
  Eigen::VectorXcd Cp = differentiate_uniform<Complex>(C, h, 1, kLineStencilWidth);
  Eigen::VectorXcd Cpp = differentiate_uniform<Complex>(C, h, 2, kLineStencilWidth);
  Eigen::VectorXcd Cppp = differentiate_uniform<Complex>(C, h, 3, kLineStencilWidth);
  Eigen::VectorXd defect(x.size());
  for (int i = 0; i < x.size(); ++i) {
    double xi = x[i];
    Complex d = xi * xi * xi * (xi - alpha) * Cppp[i]
              + (4.0 * xi * xi * xi - 3.5 * alpha * xi * xi) * Cpp[i]
              + xi * (2.0 * xi + 1.0 - 1.5 * alpha) * Cp[i]
              + 0.5 * C[i];
    defect[i] = std::abs(d);
  }
  // wide one-sided third-derivative rows degrade over a 6-node collar
  return make_report_1d("dalpha", defect, x, 6);
}

Eigen::VectorXcd lalpha_values(const Eigen::VectorXcd& C, const Eigen::VectorXcd& Cp,
                               const Eigen::VectorXcd& Cpp, const Eigen::VectorXd& x,
                               double alpha) {
  Eigen::VectorXcd out(x.size());
  for (int i = 0; i < x.size(); ++i) {
    double xi = x[i];
    out[i] = std::pow(xi, 4) * (xi - alpha) * Cpp[i] * Cpp[i]
           + 3.0 * xi * xi * xi * (xi - alpha) * Cp[i] * Cpp[i]
           + xi * xi * (2.0 * xi + 1.0 - 2.25 * alpha) * Cp[i] * Cp[i]
           + xi * C[i] * Cp[i] + 0.25 * C[i] * C[i];
  }
  return out;
}

ResidualReport lalpha_residual(const Eigen::VectorXcd& C, const Eigen::VectorXd& x,
                               double alpha) {
  check_line(x, alpha);
  double h = x[1] - x[0];
  Eigen::VectorXcd Cp = differentiate_uniform<Complex>(C, h, 1, kLineStencilWidth);
  Eigen::VectorXcd Cpp = differentiate_uniform<Complex>(C, h, 2, kLineStencilWidth);
  Eigen::VectorXcd vals = lalpha_values(C, Cp, Cpp, x, alpha);
  return make_report_1d("lalpha", vals.cwiseAbs(), x, 6);
}

double homothety_ode_defect(double m, double Z, double Zp, double Zpp, double s) {
  double V = m + s * Z;
  return Z * (s * s + 1.0) * V * V * Zpp
       - m * (s * s + 1.0) * V * Zp * Zp
       + Z * Zp * V * (2.0 * m * s - m * Z + 4.0 * s * s * Z)
       + Z * Z * (m * m + 3.0 * m * s * Z + Z * Z * (2.0 * s * s + m));
}

namespace {

Eigen::Vector2d homothety_rhs(double m, double s, const Eigen::Vector2d& y) {
  double Z = y[0], Zp = y[1];
  double V = m + s * Z;
  if (std::abs(Z) < 1e-12)
    throw DomainError("|X|^2 degenerates along the trajectory");
  if (std::abs(V) < 1e-10)
    throw DomainError("coefficient m + s Z vanishes near s = " + std::to_string(s));
  double den = Z * (s * s + 1.0) * V * V;
  double num = m * (s * s + 1.0) * V * Zp * Zp
             - Z * Zp * V * (2.0 * m * s - m * Z + 4.0 * s * s * Z)
             - Z * Z * (m * m + 3.0 * m * s * Z + Z * Z * (2.0 * s * s + m));
  return {Zp, num / den};
}

Eigen::Vector2d rk_advance(double m, double s0, double s1, Eigen::Vector2d y) {
  double t = s0;
  double h = (s1 > s0 ? 1.0 : -1.0) * std::min(0.05, std::abs(s1 - s0));
  const double rtol = 1e-12, atol = 1e-14;
  int steps = 0;
  auto f = [&](double ss, const Eigen::Vector2d& u) { return homothety_rhs(m, ss, u); };
  while ((s1 - t) * (s1 > s0 ? 1.0 : -1.0) > 1e-15) {
    if ((s1 > s0 && t + h > s1) || (s1 < s0 && t + h < s1)) h = s1 - t;
    Eigen::Vector2d k1 = f(t, y);
    Eigen::Vector2d k2 = f(t + h / 5.0, y + h * (k1 / 5.0));
    Eigen::Vector2d k3 = f(t + 3.0 * h / 10.0, y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    Eigen::Vector2d k4 = f(t + 4.0 * h / 5.0,
                           y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
    Eigen::Vector2d k5 = f(t + 8.0 * h / 9.0,
                           y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                                    64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
    Eigen::Vector2d k6 = f(t + h,
                           y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                                    46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                                    5103.0 / 18656.0 * k5));
    Eigen::Vector2d y5 = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                                  125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
    Eigen::Vector2d k7 = f(t + h, y5);
    Eigen::Vector2d y4 = y + h * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 +
                                  393.0 / 640.0 * k4 - 92097.0 / 339200.0 * k5 +
                                  187.0 / 2100.0 * k6 + k7 / 40.0);
    double err = 0.0;
    for (int c = 0; c < 2; ++c) {
      double sc = atol + rtol * std::max(std::abs(y[c]), std::abs(y5[c]));
      err = std::max(err, std::abs(y5[c] - y4[c]) / sc);
    }
    if (err <= 1.0) {
      t += h;
      y = y5;
    }
    h *= std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    if (++steps > 200000) throw AccuracyError("trajectory integration stalled");
  }
  return y;
}

}  // namespace

HomothetySolution homothety_integrate(double m, double Z0, double Zp0,
                                      double s_min, double s_max, int ns,
                                      double r_min, double r_max, int nr) {
  if (m == 0.0) throw ParameterError("m must be nonzero");
  if (!(s_min < 0.0 && s_max > 0.0))
    throw DomainError("the s-range must contain the initial point s = 0");

  HomothetySolution sol;
  sol.m = m;
  sol.s.resize(ns);
  sol.Z.resize(ns);
  double hs = (s_max - s_min) / (ns - 1);
  for (int j = 0; j < ns; ++j) sol.s[j] = s_min + j * hs;

  // integrate outward from s = 0 in both directions, landing on the nodes
  int j0 = 0;
  while (j0 + 1 < ns && sol.s[j0 + 1] <= 0.0) ++j0;
  Eigen::Vector2d y(Z0, Zp0);
  double from = 0.0;
  for (int j = j0; j >= 0; --j) {
    y = rk_advance(m, from, sol.s[j], y);
    from = sol.s[j];
    sol.Z[j] = y[0];
  }
  y = Eigen::Vector2d(Z0, Zp0);
  from = 0.0;
  for (int j = j0 + 1; j < ns; ++j) {
    y = rk_advance(m, from, sol.s[j], y);
    from = sol.s[j];
    sol.Z[j] = y[0];
  }

  auto grid = std::make_shared<ChartGrid>(r_min, r_max, s_min, s_max, nr, ns);
  ArrR gxx(nr, ns), gxy(nr, ns), gyy(nr, ns);
  OneForm xflat(grid);
  for (int j = 0; j < ns; ++j) {
    double s = sol.s[j];
    double Z = sol.Z[j];
    if (!(Z > 0.0)) throw GeometryError("Z must stay positive for a Riemannian metric");
    double V = Z / (m + s * Z);
    for (int i = 0; i < nr; ++i) {
      double er = std::exp(grid->x(i));
      gxx(i, j) = er * Z * (1.0 + s * s);
      gxy(i, j) = er * Z * (s + V);
      gyy(i, j) = er * Z * (V * V + 1.0);
      xflat.ax(i, j) = Z * s;
      xflat.ay(i, j) = Z;
    }
  }
  Metric2D g = general_metric(grid, gxx, gxy, gyy);
  g.check_riemannian();
  sol.structure = general_structure(std::move(g), std::move(xflat));
  return sol;
}

QEStructure explicit_family(double beta, double t_min, double t_max, int nt,
                            double y_min, double y_max, int ny) {
  auto grid = std::make_shared<ChartGrid>(t_min, t_max, y_min, y_max, nt, ny);
  ArrR gxx(nt, ny), gxy = ArrR::Zero(nt, ny), gyy(nt, ny);
  OneForm xflat(grid);
  for (int i = 0; i < nt; ++i) {
    double t = grid->x(i);
    double S2 = 1.0 + t * t;
    double S = std::sqrt(S2);
    double f = std::asinh(t) + beta;
    double W = f * f + t * t + 1.0;
    double xt = (-t * f * f + 2.0 * f * S + t * S2) / (S2 * W);
    double xy = (f * f + 2.0 * t * f * S - S2) / (2.0 * W);
    for (int j = 0; j < ny; ++j) {
      double ey = std::exp(grid->y(j));
      gxx(i, j) = ey * W * 4.0 / (S2 * S2);
      gyy(i, j) = ey * W;
      xflat.ax(i, j) = xt;
      xflat.ay(i, j) = xy;
    }
  }
  Metric2D g = general_metric(grid, gxx, gxy, gyy);
  g.check_riemannian();
  return general_structure(std::move(g), std::move(xflat));
}

void alpha1_closed_form(double a, double b, double c, double x,
                        double& C, double& Cp, double& Cpp) {
  if (!(x > 1.0)) throw DomainError("the closed form lives on x > 1");
  double q = std::sqrt(x * (x - 1.0));
  double A = std::asinh(std::sqrt(x - 1.0));
  double N = a + b * (q - A) + c * (3.0 * x + A * A - 2.0 * q * A);
  double Np = b * (x - 1.0) / q + 2.0 * c * (1.0 - (x - 1.0) * A / q);
  double Npp = (x - 1.0) / (q * q * q) * (0.5 * b - c * (A + q));
  C = N / x;
  Cp = Np / x - N / (x * x);
  Cpp = Npp / x - 2.0 * Np / (x * x) + 2.0 * N / (x * x * x);
}

Alpha1Solution alpha1_solution(double a, double b, double c,
                               double x_min, double x_max, int nx,
                               double y_min, double y_max, int ny) {
  if (!(x_min > 1.0)) throw DomainError("the assembled chart needs x > 1");
  Alpha1Solution sol;
  sol.a = a; sol.b = b; sol.c = c;
  sol.x.resize(nx);
  sol.C.resize(nx);
  sol.Cp.resize(nx);
  sol.Cpp.resize(nx);
  double h = (x_max - x_min) / (nx - 1);
  for (int i = 0; i < nx; ++i) {
    sol.x[i] = x_min + i * h;
    alpha1_closed_form(a, b, c, sol.x[i], sol.C[i], sol.Cp[i], sol.Cpp[i]);
  }

  // the first integral must vanish for the assembly to solve the field equations
  Eigen::VectorXcd Cc = sol.C.cast<Complex>(), Cpc = sol.Cp.cast<Complex>(),
                  Cppc = sol.Cpp.cast<Complex>();
  Eigen::VectorXcd lvals = lalpha_values(Cc, Cpc, Cppc, sol.x, 1.0);
  double scale = std::max(1.0, sol.C.cwiseAbs().maxCoeff());
  if (lvals.cwiseAbs().maxCoeff() > 1e-8 * scale * scale)
    throw ConstraintError("coefficients violate the quadratic constraint b^2 = 4ac; "
                          "the assembled pair is not a solution");

  for (int i = 0; i < nx; ++i)
    if (!(sol.Cp[i] > 0.0))
      throw GeometryError("C' must stay positive for a Riemannian metric");

  auto grid = std::make_shared<ChartGrid>(x_min, x_max, y_min, y_max, nx, ny);
  ArrR gxx(nx, ny), gxy = ArrR::Zero(nx, ny), gyy(nx, ny);
  OneForm xflat(grid);
  for (int i = 0; i < nx; ++i) {
    double x = sol.x[i];
    double C = sol.C[i], Cp = sol.Cp[i], Cpp = sol.Cpp[i];
    double xt = (3.0 * Cp + 2.0 * x * Cpp) / (2.0 * x * Cp);
    double xy = (2.0 * x * Cp + C) / (2.0 * x * Cp);
    for (int j = 0; j < ny; ++j) {
      double ey = std::exp(grid->y(j));
      gxx(i, j) = ey * Cp / (x - 1.0);
      gyy(i, j) = ey * Cp * x * x;
      xflat.ax(i, j) = xt;
      xflat.ay(i, j) = xy;
    }
  }
  Metric2D g = general_metric(grid, gxx, gxy, gyy);
  g.check_riemannian();
  sol.structure = general_structure(std::move(g), std::move(xflat));
  return sol;
}

}  // namespace qesurf
