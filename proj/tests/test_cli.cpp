// Exercises the command-line front end end to end through a shell.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

std::string g_binary;
int g_failures = 0;

struct Result {
  int exit_code;
  std::string out;
};

Result run(const std::string& args) {
  std::string cmd = g_binary + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {127, ""};
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++g_failures;
    std::cerr << "FAILED: " << what << '\n';
  } else {
    std::cout << "ok: " << what << '\n';
  }
}

std::string strip_wall_time(std::string s) {
  auto pos = s.find("\"wall_time_ms\"");
  if (pos == std::string::npos) return s;
  auto end = s.find('\n', pos);
  s.erase(pos, end - pos);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: test_cli <qesurf binary>\n";
    return 2;
  }
  g_binary = argv[1];
  std::string tmp = "cli_scratch";
  int rc = std::system(("rm -rf " + tmp + " && mkdir -p " + tmp).c_str());
  if (rc != 0) {
    std::cerr << "could not prepare the scratch directory\n";
    return 2;
  }

  {
    Result r = run("hyp-eval --a1 1 --a2 1 --a3 1 --b1 2 --b2 1.5 --z 0");
    expect(r.exit_code == 0 && std::stod(r.out) == 1.0, "series at z = 0 prints 1");
  }
  {
    Result r = run("hyp-eval --a1 1 --a2 1 --a3 1 --b1 2 --b2 1.5 --z 0.25");
    double pi = 3.14159265358979323846;
    expect(r.exit_code == 0 && std::abs(std::stod(r.out) - pi * pi / 9.0) < 1e-12,
           "series matches the closed form at z = 1/4");
  }
  {
    Result r = run("catalog list");
    int entries = 0;
    for (size_t p = r.out.find("\"name\""); p != std::string::npos;
         p = r.out.find("\"name\"", p + 1))
      ++entries;
    expect(r.exit_code == 0 && entries >= 6, "catalog lists at least six families");
  }
  {
    Result r = run("catalog show no-such-family");
    expect(r.exit_code == 2, "unknown catalog names exit with code 2");
  }
  {
    Result a = run("verify --family flat-theta --out " + tmp + "/flat");
    std::ifstream f(tmp + "/flat/report.json");
    std::stringstream ss;
    ss << f.rdbuf();
    expect(a.exit_code == 0 && ss.str().find("\"verdict\": \"pass\"") != std::string::npos,
           "flat-theta battery passes end to end");

    Result b = run("verify --family flat-theta --out " + tmp + "/flat2");
    std::ifstream f2(tmp + "/flat2/report.json");
    std::stringstream ss2;
    ss2 << f2.rdbuf();
    expect(b.exit_code == 0 &&
               strip_wall_time(ss.str()) == strip_wall_time(ss2.str()),
           "identical runs produce byte-identical reports up to wall time");
  }
  {
    std::ofstream cfg(tmp + "/perturbed.json");
    cfg << R"({"family":"hyperbolic-theta","perturb":{"field":"P","amplitude":0.05}})";
    cfg.close();
    Result r = run("verify --json " + tmp + "/perturbed.json --out " + tmp + "/bad");
    std::ifstream f(tmp + "/bad/report.json");
    std::stringstream ss;
    ss << f.rdbuf();
    expect(r.exit_code == 1 && ss.str().find("\"verdict\": \"fail\"") != std::string::npos &&
               ss.str().find("\"failed\"") != std::string::npos &&
               ss.str().find("qee") != std::string::npos,
           "perturbed config fails and names the failing residual");
  }
  {
    std::ofstream cfg(tmp + "/broken.json");
    cfg << "{ not json";
    cfg.close();
    Result r = run("verify --json " + tmp + "/broken.json");
    expect(r.exit_code == 2, "malformed JSON exits with code 2");
  }
  {
    Result shown = run("catalog show arcsinh --beta 0.5 > " + tmp + "/arcsinh.csv; echo $?");
    expect(shown.out.find("0") != std::string::npos, "catalog show emits a bundle");
    Result v = run("verify --input " + tmp + "/arcsinh.csv --tol 1e-6");
    expect(v.exit_code == 0 && v.out.find("\"verdict\": \"pass\"") != std::string::npos,
           "round-tripped bundle re-verifies with the same verdict");
  }
  {
    Result r = run("catalog show s2xs1 --mobius a=2 --out " + tmp + "/s2xs1 --tol 1e-7");
    std::ifstream f(tmp + "/s2xs1/report.json");
    std::stringstream ss;
    ss << f.rdbuf();
    expect(r.exit_code == 0 && ss.str().find("\"verdict\": \"pass\"") != std::string::npos,
           "scaled product family passes its residual battery at 1e-7");
    Result v = run("verify --input " + tmp + "/s2xs1/structure.csv --tol 1e-6");
    expect(v.exit_code == 0, "scaled product bundle re-verifies through its recorded battery");
  }
  {
    Result r = run("catalog show mobius-sphere --mobius a=2 --out " + tmp + "/ms --tol 1e-6");
    Result v = run("verify --input " + tmp + "/ms/structure.csv --tol 1e-6");
    expect(r.exit_code == 0 && v.exit_code == 0,
           "gradient horizon patch round-trips with its recorded battery");
  }
  {
    std::ofstream cfg(tmp + "/family.json");
    cfg << R"({"kind":"arcsinh","params":{"beta":0.5},"range":{"lo":-2.0,"hi":2.0,"n":129}})";
    cfg.close();
    Result r = run("verify --json " + tmp + "/family.json --out " + tmp + "/fam");
    std::ifstream f(tmp + "/fam/report.json");
    std::stringstream ss;
    ss << f.rdbuf();
    std::ifstream sc(tmp + "/fam/structure.csv");
    expect(r.exit_code == 0 && ss.str().find("\"verdict\": \"pass\"") != std::string::npos &&
               sc.good(),
           "family-kind config certifies and exports the structure");
  }
  {
    Result r = run("solve-theta --grid 33,33 --boundary pi/2 --noise 0.1 --out " + tmp + "/theta");
    std::ifstream f(tmp + "/theta/report.json");
    std::stringstream ss;
    ss << f.rdbuf();
    expect(r.exit_code == 0 && ss.str().find("\"converged\": true") != std::string::npos,
           "theta solver converges from perturbed constant data");
  }
  {
    Result r = run("solve-ode --m -2 --z0 1 --zp0 0.3 --srange -0.5,0.5 --out " + tmp + "/ode");
    expect(r.exit_code == 0, "trajectory solve passes the field equations");
  }

  std::cout << (g_failures == 0 ? "all CLI checks passed\n" : "CLI checks FAILED\n");
  return g_failures == 0 ? 0 : 1;
}
