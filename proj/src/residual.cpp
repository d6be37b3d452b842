#include "qesurf/residual.hpp"

#include <cmath>

#include <json.hpp>

namespace qesurf {

ResidualReport make_report(const std::string& name, const ArrR& absdefect,
                           const ChartGrid& grid, int collar) {
  ResidualReport r;
  r.name = name;
  r.nx = grid.nx();
  r.ny = grid.ny();
  ArrB in = grid.interior(collar);
  double sum2 = 0.0;
  long count = 0;
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      if (!in(i, j)) continue;
      double a = absdefect(i, j);
      sum2 += a * a;
      ++count;
      if (a > r.sup) {
        r.sup = a;
        r.worst_x = grid.x(i);
        r.worst_y = grid.y(j);
      }
    }
  r.l2 = count > 0 ? std::sqrt(sum2 / count) : 0.0;
  return r;
}

ResidualReport make_report_1d(const std::string& name,
                              const Eigen::VectorXd& absdefect,
                              const Eigen::VectorXd& xs, int collar) {
  ResidualReport r;
  r.name = name;
  r.nx = static_cast<int>(absdefect.size());
  r.ny = 1;
  double sum2 = 0.0;
  long count = 0;
  for (int i = collar; i < absdefect.size() - collar; ++i) {
    double a = absdefect[i];
    sum2 += a * a;
    ++count;
    if (a > r.sup) {
      r.sup = a;
      r.worst_x = xs[i];
    }
  }
  r.l2 = count > 0 ? std::sqrt(sum2 / count) : 0.0;
  return r;
}

std::string ResidualReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["sup"] = sup;
  j["l2"] = l2;
  j["worst_point"] = {{"x", worst_x}, {"y", worst_y}};
  j["grid"] = {{"nx", nx}, {"ny", ny}};
  return j.dump();
}

}  // namespace qesurf
