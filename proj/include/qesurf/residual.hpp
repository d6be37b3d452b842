#pragma once

#include <string>
#include <vector>

#include "qesurf/field.hpp"

namespace qesurf {

// Sup/l2 summary of a pointwise defect field. Norms run over valid points
// excluding a 2-node collar where one-sided stencils degrade.
struct ResidualReport {
  std::string name;
  double sup = 0.0;
  double l2 = 0.0;        // rms over the counted points
  double worst_x = 0.0;
  double worst_y = 0.0;
  int nx = 0, ny = 0;

  std::string to_json() const;
};

ResidualReport make_report(const std::string& name, const ArrR& absdefect,
                           const ChartGrid& grid, int collar = 2);

// 1D variant for sampled-function residuals (x stored in worst_x).
ResidualReport make_report_1d(const std::string& name,
                              const Eigen::VectorXd& absdefect,
                              const Eigen::VectorXd& xs, int collar = 2);

}  // namespace qesurf
