// qesurf: verification suites, solvers and catalog families for
// quasi-Einstein surface structures.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qesurf/ew.hpp"
#include "qesurf/hitchin.hpp"
#include "qesurf/hyp.hpp"
#include "qesurf/io.hpp"
#include "qesurf/solutions.hpp"

using namespace qesurf;
using nlohmann::json;

namespace {

struct Check {
  ResidualReport report;
  double gate;
};

struct RunReport {
  std::string command;
  std::vector<Check> checks;
  bool pass = true;
  double wall_ms = 0;

  void add(ResidualReport r, double gate) {
    if (r.sup > gate) pass = false;
    checks.push_back({std::move(r), gate});
  }

  json to_json() const {
    json j;
    j["command"] = command;
    j["checks"] = json::array();
    std::vector<std::string> failed;
    for (const auto& c : checks) {
      json cj = json::parse(c.report.to_json());
      cj["tolerance"] = c.gate;
      cj["pass"] = c.report.sup <= c.gate;
      if (c.report.sup > c.gate) failed.push_back(c.report.name);
      j["checks"].push_back(cj);
    }
    j["failed"] = failed;
    j["verdict"] = pass ? "pass" : "fail";
    j["wall_time_ms"] = wall_ms;
    return j;
  }
};

struct CommonOpts {
  std::string grid_spec;        // "nx,ny"
  std::string range_spec;       // "x0,x1,y0,y1"
  double tol = 1e-6;
  std::string out_dir;
  std::string json_config;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--grid", o.grid_spec, "grid size nx,ny");
  cmd->add_option("--range", o.range_spec, "coordinate range x0,x1,y0,y1");
  cmd->add_option("--tol", o.tol, "verification tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--json", o.json_config, "JSON config file");
}

std::pair<int, int> parse_grid(const std::string& s, int def_nx, int def_ny) {
  if (s.empty()) return {def_nx, def_ny};
  int nx, ny;
  char comma;
  std::istringstream ss(s);
  if (!(ss >> nx >> comma >> ny)) throw CLI::ValidationError("--grid expects nx,ny");
  return {nx, ny};
}

std::array<double, 4> parse_range(const std::string& s, std::array<double, 4> def) {
  if (s.empty()) return def;
  std::array<double, 4> r;
  char c;
  std::istringstream ss(s);
  if (!(ss >> r[0] >> c >> r[1] >> c >> r[2] >> c >> r[3]))
    throw CLI::ValidationError("--range expects x0,x1,y0,y1");
  return r;
}

double deep_gate(double tol) { return std::max(1e3 * tol, 1e-3); }

// Catalog families ------------------------------------------------------

struct FamilyParams {
  double beta = 0.5;
  double lambda = 1.0;
  double m = -2.0;
  double z0 = 1.0, zp0 = 0.3;
  double s_min = -0.5, s_max = 0.5;
  MobiusMap mobius = MobiusMap::identity();
};

struct FamilyRun {
  QEStructure structure;
  QEParams params{-1.0, 0.0};
  RunReport report;
  std::map<std::string, std::string> extra_meta;
  std::map<std::string, ScalarField> extra_fields;
};

void standard_battery(FamilyRun& run, double tol, bool with_certificate) {
  const QEStructure& s = run.structure;
  QEEResidual q = qee_residual(s, run.params);
  run.report.add(q.tensor, tol);
  for (auto& r : q.conformal_scalars) run.report.add(r, tol);

  ScalarField R = scalar_curvature(s.g);
  ScalarField lam{s.grid, R.v - 2.0 * run.params.lambda};
  run.report.add(gehe_residual(s, {-2.0 / run.params.m, lam}), tol);

  ProlongationResiduals pr = prolongation_residuals(prolong(s), run.params);
  run.report.add(pr.closed_gradient, tol);
  run.report.add(pr.closed_domega, tol);
  run.report.add(pr.constraint_scalar, deep_gate(tol));
  run.report.add(pr.constraint_oneform, deep_gate(tol));

  if (s.gauge == Gauge::Conformal &&
      std::abs(run.params.m + 1.0) < 1e-14 && std::abs(run.params.lambda) < 1e-14) {
    MatrixConnection V = flat_connection(s);
    run.report.add(make_report("flat_connection_curvature", frobenius(curvature_of(V)),
                               *s.grid),
                   tol);
    HitchinResidual hr = hitchin_residual(hitchin_pair(s));
    run.report.add(hr.curvature, tol);
    run.report.add(hr.holomorphy, tol);
    run.report.add(lax_commutator(s, {Complex(0.3, 0), Complex(-1.2, 0), Complex(2.5, 0)}),
                   tol);
  }
  if (with_certificate) run.report.add(curvature_certificate(s), tol);
}

FamilyRun run_family(const std::string& name, const FamilyParams& p,
                     const CommonOpts& o) {
  FamilyRun run;
  run.report.command = "verify --family " + name;

  if (name == "flat-theta" || name == "hyperbolic-theta") {
    auto [nx, ny] = parse_grid(o.grid_spec, 65, 65);
    auto r = parse_range(o.range_spec, {0.0, 1.0, 1.0, 2.0});
    auto g = std::make_shared<ChartGrid>(r[0], r[1], r[2], r[3], nx, ny);
    run.structure = name == "flat-theta" ? flat_structure(g) : hyperbolic_structure(g);
    run.params = QEParams(-1.0, 0.0);
    standard_battery(run, o.tol, true);
  } else if (name == "mobius-sphere") {
    auto [nx, ny] = parse_grid(o.grid_spec, 129, 129);
    auto r = parse_range(o.range_spec, {-1.0, 1.0, -1.0, 1.0});
    auto g = std::make_shared<ChartGrid>(r[0], r[1], r[2], r[3], nx, ny);
    ScalarField u = mobius_u(p.mobius, p.lambda, g);
    run.report.add(constcurv_residual(u, p.lambda), o.tol);
    run.report.add(kw_residual(u, constant_field(g, 1.0), p.lambda, OneForm(g),
                               round_sphere_metric(g)),
                   o.tol);
    GehePatch patch = mobius_gehe_patch(p.mobius, p.lambda, g);
    run.structure = patch.structure;
    run.params = QEParams(-1.0, 0.0);
    run.report.add(gehe_residual(patch.structure, {patch.c, patch.Lambda}), o.tol);
    run.report.add(holomorphy_test(patch.structure, patch.c), o.tol);
    run.extra_meta["lambda"] = std::to_string(p.lambda);
    run.extra_meta["battery"] = "gehe";
    run.extra_meta["c"] = std::to_string(patch.c);
    run.extra_fields.emplace("Lambda", patch.Lambda);
  } else if (name == "s2xs1") {
    auto [nx, ny] = parse_grid(o.grid_spec, 257, 257);
    auto r = parse_range(o.range_spec, {-1.0, 1.0, -1.0, 1.0});
    auto g = std::make_shared<ChartGrid>(r[0], r[1], r[2], r[3], nx, ny);
    WarpedStructure3D w = s2xs1_structure(p.mobius, p.lambda, g);
    WarpedResiduals wr = warped_residual(w);
    run.report.add(wr.tangential, o.tol);
    run.report.add(wr.fiber, o.tol);
    run.report.add(wr.potential, o.tol);
    run.report.add(constcurv_residual(w.u, p.lambda), o.tol);
    run.structure = general_structure(w.base_metric(), w.xflat_2d());
    run.params = QEParams(-1.0, p.lambda);
    run.extra_meta["m"] = "-1";
    run.extra_meta["lambda"] = std::to_string(p.lambda);
    run.extra_meta["u_shift"] = "0";
    run.extra_meta["battery"] = "warped";
    run.extra_fields.emplace("u", w.u);
  } else if (name == "arcsinh") {
    auto [nx, ny] = parse_grid(o.grid_spec, 257, 65);
    auto r = parse_range(o.range_spec, {-2.0, 2.0, 0.0, 1.0});
    run.structure = explicit_family(p.beta, r[0], r[1], nx, r[2], r[3], ny);
    run.params = QEParams(-1.0, 0.0);
    QEEResidual q = qee_residual(run.structure, run.params);
    run.report.add(q.tensor, o.tol);
    run.report.add(curvature_certificate(run.structure), o.tol);
    run.extra_meta["beta"] = std::to_string(p.beta);
  } else if (name == "warped-product") {
    auto [nx, ny] = parse_grid(o.grid_spec, 129, 129);
    auto r = parse_range(o.range_spec, {-1.0, 1.0, -1.0, 1.0});
    auto g = std::make_shared<ChartGrid>(r[0], r[1], r[2], r[3], nx, ny);
    if (!(p.m * p.lambda < 0.0))
      throw CLI::ValidationError("warped-product needs m*lambda < 0 for a constant potential");
    Metric2D round = round_sphere_metric(g);
    Metric2D base = conformal_metric(g, *round.H + std::log(1.0 / p.lambda));
    WarpedProductSpec spec{base, constant_field(g, 0.5 * p.m * std::log(-p.m * p.lambda)),
                           p.m, p.lambda};
    WarpedResiduals wr = warped_residual(spec);
    run.report.add(wr.tangential, o.tol);
    run.report.add(wr.fiber, o.tol);
    run.report.add(wr.potential, o.tol);
    run.structure = general_structure(base, OneForm(g));
    run.params = QEParams(p.m + 1.0 == 0.0 ? -1.0 : p.m + 1.0, p.lambda);
    run.extra_meta["m"] = std::to_string(p.m);
    run.extra_meta["lambda"] = std::to_string(p.lambda);
  } else if (name == "homothety") {
    auto [nx, ny] = parse_grid(o.grid_spec, 65, 65);
    HomothetySolution sol =
        homothety_integrate(p.m, p.z0, p.zp0, p.s_min, p.s_max, ny, 0.0, 1.0, nx);
    run.structure = sol.structure;
    run.params = QEParams(p.m, 0.0);
    QEEResidual q = qee_residual(run.structure, run.params);
    run.report.add(q.tensor, o.tol);
    if (std::abs(p.m + 1.0) < 1e-14)
      run.report.add(curvature_certificate(run.structure), o.tol);
    run.extra_meta["m"] = std::to_string(p.m);
  } else {
    throw CLI::ValidationError("unknown family: " + name);
  }
  return run;
}

const std::vector<std::pair<std::string, std::string>> kCatalog = {
    {"flat-theta", "constant-curvature flat structure on the upper half-plane"},
    {"hyperbolic-theta", "constant-curvature hyperbolic structure on the upper half-plane"},
    {"mobius-sphere", "sphere-chart conformal factor of a Moebius map (--mobius a=2 --lambda L)"},
    {"s2xs1", "scaled product structure over the sphere chart (--mobius, --lambda)"},
    {"arcsinh", "one-parameter family without Killing vectors (--beta B)"},
    {"warped-product", "constant-potential product over an Einstein base (--m, --lambda)"},
    {"homothety", "trajectory family of the scaling reduction (--m, --z0, --zp0, --srange)"},
};

int write_report(const RunReport& report, const CommonOpts& o) {
  json j = report.to_json();
  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    std::ofstream f(o.out_dir + "/report.json");
    f << j.dump(2) << '\n';
  } else {
    std::cout << j.dump(2) << '\n';
  }
  return report.pass ? 0 : 1;
}

void apply_perturbation(QEStructure& s, const std::string& field, double amplitude) {
  auto bump = [&](ArrC& a) {
    for (int j = 0; j < s.grid->ny(); ++j)
      for (int i = 0; i < s.grid->nx(); ++i)
        a(i, j) *= 1.0 + amplitude * std::sin(3.0 * s.grid->x(i)) *
                             std::cos(2.0 * s.grid->y(j));
  };
  if (field == "P" && s.P) {
    ArrC P = *s.P;
    bump(P);
    s = conformal_structure(s.grid, *s.H, P);
  } else if (field == "X") {
    bump(s.xflat.ax);
    bump(s.xflat.ay);
  } else if (field == "H" && s.H) {
    ArrR H = *s.H;
    for (int j = 0; j < s.grid->ny(); ++j)
      for (int i = 0; i < s.grid->nx(); ++i)
        H(i, j) += amplitude * std::sin(3.0 * s.grid->x(i));
    s = conformal_structure(s.grid, H, *s.P);
  } else {
    throw CLI::ValidationError("unknown perturbation field: " + field);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification lab for quasi-Einstein surface structures"};
  app.require_subcommand(1);

  // verify ---------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "run a residual battery");
  CommonOpts vo;
  std::string v_family, v_input;
  add_common(verify, vo);
  verify->add_option("--family", v_family, "built-in family name");
  verify->add_option("--input", v_input, "structure bundle CSV to re-verify");
  FamilyParams vp;
  verify->add_option("--beta", vp.beta, "family parameter");
  verify->add_option("--lambda", vp.lambda, "curvature scale");
  verify->add_option("--m", vp.m, "quasi-Einstein parameter m");
  std::vector<std::string> v_mobius;
  verify->add_option("--mobius", v_mobius, "Moebius entries like a=2 (repeatable)");

  // solve-theta ------------------------------------------------------------
  auto* stheta = app.add_subcommand("solve-theta", "Newton-solve the gauge-phase equation");
  CommonOpts so;
  add_common(stheta, so);
  std::string boundary = "pi/2";
  double init_noise = 0.0;
  stheta->add_option("--boundary", boundary,
                     "Dirichlet data: pi/2, -pi/2, const:V, xlinear:A,B, or exact");
  stheta->add_option("--noise", init_noise, "amplitude of the interior seed perturbation");

  // solve-ode ---------------------------------------------------------------
  auto* sode = app.add_subcommand("solve-ode", "integrate the scaling-reduction trajectory");
  CommonOpts oo;
  add_common(sode, oo);
  FamilyParams op;
  sode->add_option("--m", op.m, "parameter m")->required();
  sode->add_option("--z0", op.z0, "Z(0)");
  sode->add_option("--zp0", op.zp0, "Z'(0)");
  std::string srange = "-0.5,0.5";
  sode->add_option("--srange", srange, "s0,s1");

  // catalog -----------------------------------------------------------------
  auto* catalog = app.add_subcommand("catalog", "list or emit built-in families");
  CommonOpts co;
  add_common(catalog, co);
  std::string cat_action, cat_name;
  catalog->add_option("action", cat_action, "list | show")->required();
  catalog->add_option("name", cat_name, "family name for show");
  FamilyParams cp;
  catalog->add_option("--beta", cp.beta, "family parameter");
  catalog->add_option("--lambda", cp.lambda, "curvature scale");
  catalog->add_option("--m", cp.m, "quasi-Einstein parameter m");
  catalog->add_option("--z0", cp.z0, "Z(0)");
  catalog->add_option("--zp0", cp.zp0, "Z'(0)");
  std::vector<std::string> c_mobius;
  catalog->add_option("--mobius", c_mobius, "Moebius entries like a=2 (repeatable)");

  // hyp-eval ------------------------------------------------------------------
  auto* hyp = app.add_subcommand("hyp-eval", "evaluate the generalized hypergeometric series");
  double ha1, ha2, ha3, hb1, hb2, hz;
  hyp->add_option("--a1", ha1)->required();
  hyp->add_option("--a2", ha2)->required();
  hyp->add_option("--a3", ha3)->required();
  hyp->add_option("--b1", hb1)->required();
  hyp->add_option("--b2", hb2)->required();
  hyp->add_option("--z", hz)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto parse_mobius = [](const std::vector<std::string>& entries) {
    Complex a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};
    for (const auto& e : entries) {
      auto eq = e.find('=');
      if (eq == std::string::npos)
        throw CLI::ValidationError("--mobius expects key=value");
      std::string key = e.substr(0, eq);
      double value = std::stod(e.substr(eq + 1));
      if (key == "a") a = value;
      else if (key == "b") b = value;
      else if (key == "c") c = value;
      else if (key == "d") d = value;
      else throw CLI::ValidationError("Moebius keys are a, b, c, d");
    }
    return MobiusMap(a, b, c, d);
  };

  try {
    auto t0 = std::chrono::steady_clock::now();

    if (*hyp) {
      SeriesSpec spec{Complex(ha1, 0), Complex(ha2, 0), Complex(ha3, 0),
                      Complex(hb1, 0), Complex(hb2, 0), Complex(hz, 0)};
      Complex v = eval_3f2(spec);
      std::cout.precision(15);
      if (std::abs(v.imag()) < 1e-13 * std::max(1.0, std::abs(v.real())))
        std::cout << v.real() << '\n';
      else
        std::cout << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i\n";
      return 0;
    }

    if (*catalog) {
      if (cat_action == "list") {
        json j = json::array();
        for (const auto& [name, desc] : kCatalog)
          j.push_back({{"name", name}, {"about", desc}});
        std::cout << j.dump(2) << '\n';
        return 0;
      }
      if (cat_action != "show") throw CLI::ValidationError("catalog action is list or show");
      bool known = false;
      for (const auto& [name, desc] : kCatalog) known |= name == cat_name;
      if (!known) {
        std::cerr << "unknown catalog entry: " << cat_name << '\n';
        return 2;
      }
      if (!c_mobius.empty()) cp.mobius = parse_mobius(c_mobius);
      else if (cat_name == "mobius-sphere" || cat_name == "s2xs1")
        cp.mobius = MobiusMap::scaling(2.0);
      FamilyRun run = run_family(cat_name, cp, co);
      run.report.command = "catalog show " + cat_name;
      auto t1 = std::chrono::steady_clock::now();
      run.report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

      StructureBundle bundle = bundle_from_structure(run.structure);
      bundle.meta["family"] = cat_name;
      bundle.meta["m"] = std::to_string(run.params.m);
      bundle.meta["lambda"] = std::to_string(run.params.lambda);
      for (auto& [k, v] : run.extra_meta) bundle.meta[k] = v;
      for (auto& [k, v] : run.extra_fields) bundle.fields.emplace(k, v);

      if (!co.out_dir.empty()) {
        std::filesystem::create_directories(co.out_dir);
        std::ofstream f(co.out_dir + "/structure.csv");
        write_bundle(f, bundle);
        std::ofstream rep(co.out_dir + "/report.json");
        rep << run.report.to_json().dump(2) << '\n';
      } else {
        write_bundle(std::cout, bundle);
        std::cerr << run.report.to_json().dump(2) << '\n';
      }
      return run.report.pass ? 0 : 1;
    }

    if (*verify) {
      CommonOpts o = vo;
      RunReport report;

      if (!o.json_config.empty()) {
        std::ifstream f(o.json_config);
        if (!f) {
          std::cerr << "cannot open config: " << o.json_config << '\n';
          return 2;
        }
        json cfg;
        try {
          cfg = json::parse(f);
        } catch (const json::exception& e) {
          std::cerr << "malformed config JSON: " << e.what() << '\n';
          return 2;
        }
        if (cfg.contains("kind")) {
          // solution-family config: {kind, params{...}, range{lo,hi,n}}
          std::string kind = cfg["kind"].get<std::string>();
          json prm = cfg.value("params", json::object());
          json rng = cfg.value("range", json::object());
          double lo = rng.value("lo", kind == "alpha1" ? 1.25 : (kind == "homothety" ? -0.5 : -2.0));
          double hi = rng.value("hi", kind == "alpha1" ? 4.0 : (kind == "homothety" ? 0.5 : 2.0));
          int n = rng.value("n", 129);
          QEStructure s;
          double m = -1.0;
          if (kind == "arcsinh") {
            s = explicit_family(prm.value("beta", 0.5), lo, hi, n, 0.0, 1.0, 65);
          } else if (kind == "alpha1") {
            double beta = prm.value("beta", 0.5);
            double a = prm.value("a", -beta * beta);
            double b = prm.value("b", 2.0 * beta);
            double c = prm.value("c", -1.0);
            s = alpha1_solution(a, b, c, lo, hi, n, 0.0, 1.0, 65).structure;
          } else if (kind == "homothety") {
            m = prm.value("m", -2.0);
            s = homothety_integrate(m, prm.value("z0", 1.0), prm.value("zp0", 0.3),
                                    lo, hi, n, 0.0, 1.0, n).structure;
          } else {
            std::cerr << "unknown family kind: " << kind << '\n';
            return 2;
          }
          report.command = "verify --json (" + kind + ")";
          double tol = cfg.value("tol", o.tol);
          QEEResidual q = qee_residual(s, QEParams(m, 0.0));
          report.add(q.tensor, tol);
          if (std::abs(m + 1.0) < 1e-14)
            report.add(curvature_certificate(s), tol);
          if (!o.out_dir.empty()) {
            std::filesystem::create_directories(o.out_dir);
            StructureBundle bd = bundle_from_structure(s);
            bd.meta["family"] = kind;
            bd.meta["m"] = std::to_string(m);
            bd.meta["lambda"] = "0";
            std::ofstream f2(o.out_dir + "/structure.csv");
            write_bundle(f2, bd);
          }
          auto tend = std::chrono::steady_clock::now();
          report.wall_ms = std::chrono::duration<double, std::milli>(tend - t0).count();
          return write_report(report, o);
        }
        std::string family = cfg.value("family", "flat-theta");
        FamilyParams p;
        if (cfg.contains("params")) {
          auto& pj = cfg["params"];
          p.beta = pj.value("beta", p.beta);
          p.lambda = pj.value("lambda", p.lambda);
          p.m = pj.value("m", p.m);
          if (pj.contains("mobius"))
            p.mobius = MobiusMap::from_json(pj["mobius"].dump());
        }
        if (cfg.contains("grid")) o.grid_spec = cfg["grid"].get<std::string>();
        if (cfg.contains("range")) o.range_spec = cfg["range"].get<std::string>();
        o.tol = cfg.value("tol", o.tol);

        if (cfg.contains("perturb")) {
          // build the family structure, damage one field, re-run the battery
          FamilyRun base = run_family(family, p, o);
          QEStructure damaged = base.structure;
          apply_perturbation(damaged, cfg["perturb"].value("field", "P"),
                             cfg["perturb"].value("amplitude", 0.05));
          report.command = "verify --json (perturbed " + family + ")";
          QEEResidual q = qee_residual(damaged, base.params);
          report.add(q.tensor, o.tol);
          for (auto& r : q.conformal_scalars) report.add(r, o.tol);
        } else {
          FamilyRun run = run_family(family, p, o);
          report = std::move(run.report);
        }
      } else if (!v_input.empty()) {
        std::ifstream f(v_input);
        if (!f) {
          std::cerr << "cannot open input: " << v_input << '\n';
          return 2;
        }
        StructureBundle b = read_bundle(f);
        QEStructure s = structure_from_bundle(b);
        double m = b.meta.count("m") ? std::stod(b.meta.at("m")) : -1.0;
        double lambda = b.meta.count("lambda") ? std::stod(b.meta.at("lambda")) : 0.0;
        std::string battery = b.meta.count("battery") ? b.meta.at("battery") : "qee";
        report.command = "verify --input";
        if (battery == "gehe") {
          double c = b.meta.count("c") ? std::stod(b.meta.at("c")) : 2.0;
          report.add(gehe_residual(s, {c, b.fields.at("Lambda")}), vo.tol);
          report.add(holomorphy_test(s, c), vo.tol);
        } else if (battery == "warped") {
          WarpedStructure3D w;
          w.grid = b.grid;
          w.u = b.fields.at("u");
          w.lambda = lambda;
          WarpedResiduals wr = warped_residual(w);
          report.add(wr.tangential, vo.tol);
          report.add(wr.fiber, vo.tol);
          report.add(wr.potential, vo.tol);
        } else {
          QEEResidual q = qee_residual(s, QEParams(m, lambda));
          report.add(q.tensor, vo.tol);
          for (auto& r : q.conformal_scalars) report.add(r, vo.tol);
        }
      } else if (!v_family.empty()) {
        if (!v_mobius.empty()) vp.mobius = parse_mobius(v_mobius);
        else if (v_family == "mobius-sphere" || v_family == "s2xs1")
          vp.mobius = MobiusMap::scaling(2.0);
        FamilyRun run = run_family(v_family, vp, vo);
        report = std::move(run.report);
      } else {
        std::cerr << "verify needs --family, --input or --json\n";
        return 2;
      }

      auto t1 = std::chrono::steady_clock::now();
      report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      return write_report(report, o);
    }

    if (*stheta) {
      auto [nx, ny] = parse_grid(so.grid_spec, 33, 33);
      auto r = parse_range(so.range_spec, {0.0, 1.0, 1.0, 2.0});
      auto g = std::make_shared<ChartGrid>(r[0], r[1], r[2], r[3], nx, ny);

      auto profile = [&](double x, double y) -> double {
        if (boundary == "pi/2") return kPi / 2.0;
        if (boundary == "-pi/2") return -kPi / 2.0;
        if (boundary == "exact") return std::asin(std::tanh(std::log(y)));
        if (boundary.rfind("const:", 0) == 0) return std::stod(boundary.substr(6));
        if (boundary.rfind("xlinear:", 0) == 0) {
          auto rest = boundary.substr(8);
          auto comma = rest.find(',');
          return std::stod(rest.substr(0, comma)) + std::stod(rest.substr(comma + 1)) * x;
        }
        throw CLI::ValidationError("unknown boundary profile: " + boundary);
      };
      ScalarField init = make_field(g, [&](double x, double y) {
        double xh = (x - r[0]) / (r[1] - r[0]), yh = (y - r[2]) / (r[3] - r[2]);
        return Complex(profile(x, y) +
                           init_noise * std::sin(kPi * xh) * std::sin(kPi * yh),
                       0.0);
      });
      ThetaSolveConfig cfg;
      if (!so.json_config.empty()) {
        std::ifstream f(so.json_config);
        std::stringstream ss;
        ss << f.rdbuf();
        cfg = ThetaSolveConfig::from_json(ss.str());
      }
      ThetaSolveResult res = theta_solve(init, cfg);
      RunReport report;
      report.command = "solve-theta";
      report.add(theta_residual(res.theta), std::max(so.tol, cfg.tol * 10.0));
      json extra;
      if (!res.converged) report.pass = false;
      auto t1 = std::chrono::steady_clock::now();
      report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      json j = report.to_json();
      j["iterations"] = res.iterations;
      j["converged"] = res.converged;
      if (!so.out_dir.empty()) {
        std::filesystem::create_directories(so.out_dir);
        std::ofstream rep(so.out_dir + "/report.json");
        rep << j.dump(2) << '\n';
        std::ofstream th(so.out_dir + "/theta.csv");
        write_field_csv(th, res.theta.theta);
      } else {
        std::cout << j.dump(2) << '\n';
      }
      return res.converged ? 0 : 1;
    }

    if (*sode) {
      auto [nx, ny] = parse_grid(oo.grid_spec, 65, 65);
      auto comma = srange.find(',');
      double s0 = std::stod(srange.substr(0, comma));
      double s1 = std::stod(srange.substr(comma + 1));
      HomothetySolution sol = homothety_integrate(op.m, op.z0, op.zp0, s0, s1, ny, 0.0, 1.0, nx);
      RunReport report;
      report.command = "solve-ode";
      QEEResidual q = qee_residual(sol.structure, QEParams(op.m, 0.0));
      report.add(q.tensor, oo.tol);
      if (std::abs(op.m + 1.0) < 1e-14)
        report.add(curvature_certificate(sol.structure), oo.tol);
      auto t1 = std::chrono::steady_clock::now();
      report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      if (!oo.out_dir.empty()) {
        std::filesystem::create_directories(oo.out_dir);
        StructureBundle b = bundle_from_structure(sol.structure);
        b.meta["family"] = "homothety";
        b.meta["m"] = std::to_string(op.m);
        b.meta["lambda"] = "0";
        std::ofstream f(oo.out_dir + "/structure.csv");
        write_bundle(f, b);
      }
      return write_report(report, oo);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "solver did not converge: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
