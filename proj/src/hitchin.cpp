#include "qesurf/hitchin.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <json.hpp>

namespace qesurf {

namespace {

void require_conformal(const QEStructure& s) {
  if (s.gauge != Gauge::Conformal || !s.H || !s.P)
    throw GaugeError("operation needs a conformal-gauge structure");
}

void require_upper(const ChartGrid& g) {
  if (g.y_min() <= 0.0)
    throw DomainError("chart must stay inside the upper half-plane y > 0");
}

Mat2Field dz_of(const Mat2Field& m) {
  Mat2Field out(m.grid);
  out.a00 = wirtinger({m.grid, m.a00}).first.v;
  out.a01 = wirtinger({m.grid, m.a01}).first.v;
  out.a10 = wirtinger({m.grid, m.a10}).first.v;
  out.a11 = wirtinger({m.grid, m.a11}).first.v;
  return out;
}

Mat2Field dzb_of(const Mat2Field& m) {
  Mat2Field out(m.grid);
  out.a00 = wirtinger({m.grid, m.a00}).second.v;
  out.a01 = wirtinger({m.grid, m.a01}).second.v;
  out.a10 = wirtinger({m.grid, m.a10}).second.v;
  out.a11 = wirtinger({m.grid, m.a11}).second.v;
  return out;
}

}  // namespace

MatrixConnection flat_connection(const QEStructure& s) {
  require_conformal(s);
  auto grid = s.grid;
  ScalarField Hf{grid, s.H->cast<Complex>()};
  auto [dzH, dzbH] = wirtinger(Hf);
  const ArrC& P = *s.P;
  ArrC a = 0.5 * (dzH.v - P);
  ArrC b = 0.5 * (P.conjugate() - dzbH.v);

  MatrixConnection V{Mat2Field(grid), Mat2Field(grid)};
  V.Az.a00 = a;
  V.Az.a01 = -P.conjugate();
  V.Az.a11 = -a;
  V.Azb.a00 = b;
  V.Azb.a10 = -P;
  V.Azb.a11 = -b;
  return V;
}

MatrixConnection projective_connection(const QEStructure& s) {
  require_conformal(s);
  auto grid = s.grid;
  ScalarField Hf{grid, s.H->cast<Complex>()};
  auto [dzH, dzbH] = wirtinger(Hf);
  const ArrC& P = *s.P;

  MatrixConnection U{Mat2Field(grid), Mat2Field(grid)};
  U.Az.a00 = dzH.v - 0.5 * P;
  U.Az.a01 = -P.conjugate();
  U.Az.a11 = 0.5 * P;
  U.Azb.a00 = 0.5 * P.conjugate();
  U.Azb.a10 = -P;
  U.Azb.a11 = dzbH.v - 0.5 * P.conjugate();
  return U;
}

Mat2Field curvature_of(const MatrixConnection& A) {
  return dz_of(A.Azb) - dzb_of(A.Az) + commutator(A.Az, A.Azb);
}

HitchinPair hitchin_pair(const QEStructure& s) {
  require_conformal(s);
  auto grid = s.grid;
  ScalarField Hf{grid, s.H->cast<Complex>()};
  auto [dzH, dzbH] = wirtinger(Hf);
  const ArrC& P = *s.P;
  ArrC a = 0.5 * (dzH.v - P);

  HitchinPair p{{Mat2Field(grid), Mat2Field(grid)}, {Mat2Field(grid)},
                ScalarField{grid, s.H->cast<Complex>()}};
  p.A.Az.a00 = a;
  p.A.Az.a11 = -a;
  p.A.Azb.a00 = -a.conjugate();
  p.A.Azb.a11 = a.conjugate();
  p.Phi.Phiz.a01 = P.conjugate();
  return p;
}

HitchinPair canonical_pair(std::shared_ptr<const ChartGrid> grid) {
  require_upper(*grid);
  HitchinPair p{{Mat2Field(grid), Mat2Field(grid)}, {Mat2Field(grid)}, ScalarField(grid)};
  const Complex I{0, 1};
  for (int j = 0; j < grid->ny(); ++j) {
    double y = grid->y(j);
    for (int i = 0; i < grid->nx(); ++i) {
      p.A.Az.a00(i, j) = I / (4.0 * y);
      p.A.Az.a11(i, j) = -I / (4.0 * y);
      p.A.Azb.a00(i, j) = I / (4.0 * y);
      p.A.Azb.a11(i, j) = -I / (4.0 * y);
      p.Phi.Phiz.a01(i, j) = 1.0 / (2.0 * y);
      p.H.v(i, j) = -std::log(2.0 * y * y);
    }
  }
  return p;
}

HitchinResidual hitchin_residual(const HitchinPair& p) {
  Mat2Field F = curvature_of(p.A);
  Mat2Field phi_star = adjoint(p.Phi.Phiz);
  Mat2Field first = F + commutator(p.Phi.Phiz, phi_star);

  Mat2Field second = dzb_of(p.Phi.Phiz) + commutator(p.A.Azb, p.Phi.Phiz);

  HitchinResidual out;
  out.curvature = make_report("hitchin_curvature", frobenius(first), *p.Phi.Phiz.grid);
  out.holomorphy = make_report("hitchin_dbar", frobenius(second), *p.Phi.Phiz.grid);
  return out;
}

MatrixConnection gauge_transform(const MatrixConnection& A, const Mat2Field& gamma) {
  Mat2Field gi = inverse(gamma);
  MatrixConnection out{Mat2Field(A.Az.grid), Mat2Field(A.Az.grid)};
  out.Az = matmul(matmul(gamma, A.Az), gi) - matmul(dz_of(gamma), gi);
  out.Azb = matmul(matmul(gamma, A.Azb), gi) - matmul(dzb_of(gamma), gi);
  return out;
}

HitchinPair gauge_transform(const HitchinPair& p, const Mat2Field& gamma) {
  Mat2Field gi = inverse(gamma);
  HitchinPair out = p;
  out.A = gauge_transform(p.A, gamma);
  out.Phi.Phiz = matmul(matmul(gamma, p.Phi.Phiz), gi);
  return out;
}

namespace {

struct LaxData {
  ArrC a, b;
  ArrC P, Pb;
};

LaxData lax_data(const QEStructure& s) {
  require_conformal(s);
  ScalarField Hf{s.grid, s.H->cast<Complex>()};
  auto [dzH, dzbH] = wirtinger(Hf);
  LaxData d;
  d.P = *s.P;
  d.Pb = s.P->conjugate();
  d.a = 0.5 * (dzH.v - d.P);
  d.b = 0.5 * (d.Pb - dzbH.v);
  return d;
}

using Section = std::array<ScalarField, 2>;

Section apply_L(const LaxData& d, Complex lambda, const Section& s) {
  auto grid = s[0].grid;
  ScalarField d0 = wirtinger(s[0]).second;
  ScalarField d1 = wirtinger(s[1]).second;
  Section out{ScalarField(grid), ScalarField(grid)};
  out[0].v = d0.v + d.b * s[0].v;
  out[1].v = d1.v - d.b * s[1].v + lambda * d.P * s[0].v;
  return out;
}

Section apply_M(const LaxData& d, Complex lambda, const Section& s) {
  auto grid = s[0].grid;
  ScalarField d0 = wirtinger(s[0]).first;
  ScalarField d1 = wirtinger(s[1]).first;
  Section out{ScalarField(grid), ScalarField(grid)};
  out[0].v = d.Pb * s[1].v + lambda * (d0.v + d.a * s[0].v);
  out[1].v = lambda * (d1.v - d.a * s[1].v);
  return out;
}

Section probe_section(std::shared_ptr<const ChartGrid> grid, int which) {
  Section s{ScalarField(grid), ScalarField(grid)};
  switch (which) {
    case 0:
      s[0].v.setConstant(Complex(1, 0));
      s[1].v.setConstant(Complex(1, 0));
      break;
    case 1:
      s[0] = make_field(grid, [](double x, double y) { return Complex(x, y); });
      break;
    case 2:
      s[1] = make_field(grid, [](double x, double y) { return Complex(x, -y); });
      break;
    default:
      throw ParameterError("probe section index must be 0, 1 or 2");
  }
  return s;
}

}  // namespace

std::array<ScalarField, 2> lax_commutator_section(const QEStructure& s,
                                                  Complex lambda, int section) {
  LaxData d = lax_data(s);
  Section probe = probe_section(s.grid, section);
  Section lm = apply_L(d, lambda, apply_M(d, lambda, probe));
  Section ml = apply_M(d, lambda, apply_L(d, lambda, probe));
  return {ScalarField{s.grid, lm[0].v - ml[0].v}, ScalarField{s.grid, lm[1].v - ml[1].v}};
}

ResidualReport lax_commutator(const QEStructure& s,
                              const std::vector<Complex>& lambda_samples) {
  if (lambda_samples.size() < 3)
    throw ParameterError("the commutator is quadratic in the spectral parameter; "
                         "use at least 3 samples");
  ArrR worst = ArrR::Zero(s.grid->nx(), s.grid->ny());
  for (Complex lambda : lambda_samples)
    for (int sec = 0; sec < 3; ++sec) {
      auto c = lax_commutator_section(s, lambda, sec);
      worst = worst.max(c[0].v.abs()).max(c[1].v.abs());
    }
  return make_report("lax_commutator", worst, *s.grid);
}

ResidualReport theta_residual(const ThetaField& t) {
  auto grid = t.theta.grid;
  require_upper(*grid);
  const ScalarField& th = t.theta;
  ArrC lap = diff(th, Axis::X, 2).v + diff(th, Axis::Y, 2).v;
  ArrC tx = diff(th, Axis::X, 1).v, ty = diff(th, Axis::Y, 1).v;
  ArrC sin_t = th.v.sin(), cos_t = th.v.cos();
  ArrC y = grid->ys().cast<Complex>();
  ArrC defect = y.square() * lap + y * (sin_t * ty + cos_t * tx) + cos_t;
  return make_report("theta", defect.abs(), *grid);
}

std::string ThetaSolveConfig::to_json() const {
  nlohmann::json j;
  j["max_iter"] = max_iter;
  j["tol"] = tol;
  j["damping_max_halvings"] = damping_max_halvings;
  return j.dump();
}

ThetaSolveConfig ThetaSolveConfig::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ThetaSolveConfig cfg;
  if (j.contains("max_iter")) cfg.max_iter = j["max_iter"].get<int>();
  if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
  if (j.contains("damping_max_halvings"))
    cfg.damping_max_halvings = j["damping_max_halvings"].get<int>();
  return cfg;
}

namespace {

ArrR theta_defect(const ScalarField& th) {
  auto grid = th.grid;
  ArrC lap = diff(th, Axis::X, 2).v + diff(th, Axis::Y, 2).v;
  ArrC tx = diff(th, Axis::X, 1).v, ty = diff(th, Axis::Y, 1).v;
  ArrC y = grid->ys().cast<Complex>();
  ArrC defect = y.square() * lap + y * (th.v.sin() * ty + th.v.cos() * tx) + th.v.cos();
  return defect.real();
}

double interior_norm2(const ArrR& r, int nx, int ny) {
  double acc = 0;
  for (int j = 1; j < ny - 1; ++j)
    for (int i = 1; i < nx - 1; ++i) acc += r(i, j) * r(i, j);
  return std::sqrt(acc);
}

double interior_sup(const ArrR& r, int nx, int ny) {
  double m = 0;
  for (int j = 1; j < ny - 1; ++j)
    for (int i = 1; i < nx - 1; ++i) m = std::max(m, std::abs(r(i, j)));
  return m;
}

}  // namespace

ThetaSolveResult theta_solve(const ScalarField& init, const ThetaSolveConfig& cfg) {
  auto grid = init.grid;
  require_upper(*grid);
  if (grid->masked()) throw DomainError("theta solver expects an unmasked rectangle");
  const int nx = grid->nx(), ny = grid->ny();
  const int nun = (nx - 2) * (ny - 2);
  auto index = [nx](int i, int j) { return (j - 1) * (nx - 2) + (i - 1); };

  ScalarField th{grid, init.v.real().cast<Complex>()};
  ArrR defect = theta_defect(th);
  double norm = interior_norm2(defect, nx, ny);

  ThetaSolveResult out;
  double prev_sup = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    double sup = interior_sup(defect, nx, ny);
    if (sup < cfg.tol) {
      out.theta = ThetaField{th};
      out.iterations = iter;
      out.residual = sup;
      out.converged = true;
      return out;
    }
    if (iter >= 2 && sup > 0.5 * prev_sup) break;  // stagnated at the float floor
    prev_sup = sup;

    ArrR tx = diff(th, Axis::X, 1).v.real();
    ArrR ty = diff(th, Axis::Y, 1).v.real();
    ArrR sin_t = th.v.real().sin(), cos_t = th.v.real().cos();

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(nun) * 24);
    Eigen::VectorXd rhs(nun);
    for (int j = 1; j < ny - 1; ++j) {
      StencilRow wyy = derivative_row(ny, j, 2, grid->hy(), kChartStencilWidth);
      StencilRow wy = derivative_row(ny, j, 1, grid->hy(), kChartStencilWidth);
      double y = grid->y(j);
      for (int i = 1; i < nx - 1; ++i) {
        StencilRow wxx = derivative_row(nx, i, 2, grid->hx(), kChartStencilWidth);
        StencilRow wx = derivative_row(nx, i, 1, grid->hx(), kChartStencilWidth);
        const int row = index(i, j);
        rhs[row] = -defect(i, j);
        for (int k = 0; k < wxx.w.size(); ++k) {
          int ii = wxx.start + k;
          if (ii < 1 || ii > nx - 2) continue;
          trips.emplace_back(row, index(ii, j), y * y * wxx.w[k]);
        }
        for (int k = 0; k < wyy.w.size(); ++k) {
          int jj = wyy.start + k;
          if (jj < 1 || jj > ny - 2) continue;
          trips.emplace_back(row, index(i, jj), y * y * wyy.w[k]);
        }
        for (int k = 0; k < wx.w.size(); ++k) {
          int ii = wx.start + k;
          if (ii < 1 || ii > nx - 2) continue;
          trips.emplace_back(row, index(ii, j), y * cos_t(i, j) * wx.w[k]);
        }
        for (int k = 0; k < wy.w.size(); ++k) {
          int jj = wy.start + k;
          if (jj < 1 || jj > ny - 2) continue;
          trips.emplace_back(row, index(i, jj), y * sin_t(i, j) * wy.w[k]);
        }
        double diag = y * (cos_t(i, j) * ty(i, j) - sin_t(i, j) * tx(i, j)) - sin_t(i, j);
        trips.emplace_back(row, row, diag);
      }
    }

    Eigen::SparseMatrix<double> jac(nun, nun);
    jac.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(jac);
    if (lu.info() != Eigen::Success)
      throw ConvergenceError("Newton linearization is singular");
    Eigen::VectorXd delta = lu.solve(rhs);

    double t = 1.0;
    for (int halving = 0; halving <= cfg.damping_max_halvings; ++halving) {
      ScalarField trial = th;
      for (int j = 1; j < ny - 1; ++j)
        for (int i = 1; i < nx - 1; ++i)
          trial.v(i, j) += Complex(t * delta[index(i, j)], 0.0);
      ArrR trial_defect = theta_defect(trial);
      double trial_norm = interior_norm2(trial_defect, nx, ny);
      if (trial_norm < norm || halving == cfg.damping_max_halvings) {
        th = trial;
        defect = trial_defect;
        norm = trial_norm;
        break;
      }
      t *= 0.5;
    }
    out.iterations = iter + 1;
  }

  out.theta = ThetaField{th};
  out.residual = interior_sup(defect, nx, ny);
  out.converged = out.residual < cfg.tol;
  return out;
}

ReconstructedH reconstruct_H(const ThetaField& t, int i0, int j0, double H0) {
  auto grid = t.theta.grid;
  require_upper(*grid);
  double pre = theta_residual(t).sup;
  if (pre > 1e-6)
    throw ContractError("theta field does not satisfy its equation; dH is not closed");

  const ScalarField& th = t.theta;
  ArrC tx = diff(th, Axis::X, 1).v, ty = diff(th, Axis::Y, 1).v;
  ArrC y = grid->ys().cast<Complex>();
  OneForm dH(grid);
  dH.ax = -ty + th.v.cos() / y;
  dH.ay = tx + th.v.sin() / y - 1.0 / y;

  ScalarField cx = diff({grid, dH.ax}, Axis::Y, 1);
  ScalarField cy = diff({grid, dH.ay}, Axis::X, 1);
  double compat = sup_over((cx.v - cy.v).abs(), grid->interior(2));
  if (compat > 1e-4)
    throw ContractError("mixed partials of the reconstructed factor disagree");

  ReconstructedH out;
  out.H = potential_from_oneform(dH, i0, j0, Complex(H0, 0));
  out.compatibility = compat;
  return out;
}

QEStructure structure_from_theta(const ThetaField& t, double H0) {
  auto grid = t.theta.grid;
  ReconstructedH rec = reconstruct_H(t, grid->nx() / 2, grid->ny() / 2, H0);
  const Complex I{0, 1};
  ArrC P = (-I * t.theta.v).exp() / (2.0 * grid->ys().cast<Complex>());
  return conformal_structure(grid, rec.H.v.real(), P);
}

ResidualReport curvature_certificate(const QEStructure& s) {
  auto grid = s.grid;
  ArrC x2 = metric_pairing(s.g, s.xflat, s.xflat);
  double floor = 0.0;
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i)
      if (grid->valid(i, j)) floor = std::max(floor, std::abs(x2(i, j)));
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i)
      if (grid->valid(i, j) && std::abs(x2(i, j)) < 1e-12 * floor)
        throw GeometryError("X vanishes on the chart; the rescaled metric degenerates");

  if (floor < 1e-300)
    throw GeometryError("X vanishes identically; the rescaled metric degenerates");
  ScalarField Rh;
  if (s.gauge == Gauge::Conformal && s.H && s.P) {
    ArrR Hh = (2.0 * s.P->abs2()).log();
    Rh = scalar_curvature(conformal_metric(grid, Hh));
  } else {
    ArrR scale = x2.real();
    Metric2D h = general_metric(grid, scale * s.g.gxx, scale * s.g.gxy, scale * s.g.gyy);
    Rh = scalar_curvature_general(h);
  }
  return make_report("constant_curvature_certificate", (Rh.v + Complex(2, 0)).abs(), *grid);
}

ScalarField log_branch(const ScalarField& P) {
  auto grid = P.grid;
  if (grid->masked())
    throw BranchError("continuous logarithm needs a simply connected chart");
  ScalarField Px = diff(P, Axis::X, 1), Py = diff(P, Axis::Y, 1);
  OneForm dlog(grid);
  dlog.ax = Px.v / P.v;
  dlog.ay = Py.v / P.v;
  int i0 = grid->nx() / 2, j0 = grid->ny() / 2;
  Complex base = std::log(P.v(i0, j0));
  ScalarField Q = potential_from_oneform(dlog, i0, j0, base);
  double rel = sup_over(((Q.v.exp() - P.v) / P.v).abs(), grid->interior(2));
  if (rel > 1e-6)
    throw BranchError("logarithm branch is inconsistent around the chart");
  return Q;
}

ResidualReport imQ_residual(const QEStructure& s) {
  require_conformal(s);
  auto grid = s.grid;
  ScalarField Q = log_branch(ScalarField{grid, *s.P});
  ScalarField W{grid, Q.v - Q.v.conjugate()};
  ScalarField Wzb = wirtinger(W).second;
  ScalarField lhs = wirtinger(Wzb).first;
  auto [Qz, Qzb] = wirtinger(Q);
  ScalarField Qc{grid, Q.v.conjugate()};
  auto [Qcz, Qczb] = wirtinger(Qc);
  ArrC rhs = Q.v.conjugate().exp() * Qcz.v - Q.v.exp() * Qzb.v;
  return make_report("imq_integrability", (lhs.v - rhs).abs(), *grid);
}

}  // namespace qesurf
