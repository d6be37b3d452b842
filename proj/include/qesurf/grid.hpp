#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qesurf/core.hpp"

namespace qesurf {

// Rectangular discretized coordinate patch. Optional mask flags points as
// valid/invalid for domains like half-planes or annuli; masked lines split
// into maximal valid runs for differentiation.
class ChartGrid {
 public:
  ChartGrid(double x_min, double x_max, double y_min, double y_max,
            int nx, int ny);
  ChartGrid(double x_min, double x_max, double y_min, double y_max,
            int nx, int ny, ArrB mask);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double x_min() const { return x0_; }
  double x_max() const { return x1_; }
  double y_min() const { return y0_; }
  double y_max() const { return y1_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double x(int i) const { return x0_ + i * hx_; }
  double y(int j) const { return y0_ + j * hy_; }

  bool masked() const { return mask_.has_value(); }
  bool valid(int i, int j) const { return !mask_ ? true : (*mask_)(i, j); }
  const std::optional<ArrB>& mask() const { return mask_; }

  // Coordinate arrays broadcast to field shape.
  const ArrR& xs() const { return xs_; }
  const ArrR& ys() const { return ys_; }

  // Points valid and at least `collar` nodes away from the patch edge and
  // from any masked point; residual sup-norms run over these.
  ArrB interior(int collar = 2) const;

  // Nearest node of a coordinate pair; DomainError when off-node by more
  // than tol*h or outside the patch.
  std::pair<int, int> node_at(double x, double y, double tol = 1e-8) const;

  bool same_layout(const ChartGrid& o) const;

  std::string descriptor_json() const;
  static ChartGrid from_descriptor_json(const std::string& text);

 private:
  void init();
  double x0_, x1_, y0_, y1_;
  int nx_, ny_;
  double hx_ = 0, hy_ = 0;
  std::optional<ArrB> mask_;
  ArrR xs_, ys_;
};

}  // namespace qesurf
