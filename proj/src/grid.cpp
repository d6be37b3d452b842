#include "qesurf/grid.hpp"

#include <cmath>

#include <json.hpp>

namespace qesurf {

ChartGrid::ChartGrid(double x_min, double x_max, double y_min, double y_max,
                     int nx, int ny)
    : x0_(x_min), x1_(x_max), y0_(y_min), y1_(y_max), nx_(nx), ny_(ny) {
  init();
}

ChartGrid::ChartGrid(double x_min, double x_max, double y_min, double y_max,
                     int nx, int ny, ArrB mask)
    : x0_(x_min), x1_(x_max), y0_(y_min), y1_(y_max), nx_(nx), ny_(ny),
      mask_(std::move(mask)) {
  if (mask_->rows() != nx_ || mask_->cols() != ny_)
    throw GridError("mask shape does not match grid");
  init();
}

void ChartGrid::init() {
  if (nx_ < 5 || ny_ < 5) throw GridError("grid needs at least 5 points per direction");
  if (!(x1_ > x0_) || !(y1_ > y0_)) throw GridError("degenerate coordinate range");
  hx_ = (x1_ - x0_) / (nx_ - 1);
  hy_ = (y1_ - y0_) / (ny_ - 1);
  xs_.resize(nx_, ny_);
  ys_.resize(nx_, ny_);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      xs_(i, j) = x(i);
      ys_(i, j) = y(j);
    }
}

ArrB ChartGrid::interior(int collar) const {
  ArrB in(nx_, ny_);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      bool ok = i >= collar && i < nx_ - collar && j >= collar && j < ny_ - collar;
      if (ok && mask_) {
        for (int d = -collar; d <= collar && ok; ++d) {
          if (!valid(i + d, j) || !valid(i, j + d)) ok = false;
        }
      }
      in(i, j) = ok && valid(i, j);
    }
  return in;
}

std::pair<int, int> ChartGrid::node_at(double xc, double yc, double tol) const {
  double fi = (xc - x0_) / hx_;
  double fj = (yc - y0_) / hy_;
  int i = static_cast<int>(std::lround(fi));
  int j = static_cast<int>(std::lround(fj));
  if (i < 0 || i >= nx_ || j < 0 || j >= ny_)
    throw DomainError("point outside grid");
  if (std::abs(fi - i) > tol / hx_ + 1e-9 || std::abs(fj - j) > tol / hy_ + 1e-9)
    throw DomainError("point is not a grid node");
  return {i, j};
}

bool ChartGrid::same_layout(const ChartGrid& o) const {
  return nx_ == o.nx_ && ny_ == o.ny_ && std::abs(x0_ - o.x0_) < 1e-14 &&
         std::abs(x1_ - o.x1_) < 1e-14 && std::abs(y0_ - o.y0_) < 1e-14 &&
         std::abs(y1_ - o.y1_) < 1e-14;
}

std::string ChartGrid::descriptor_json() const {
  nlohmann::json j;
  j["x_min"] = x0_;
  j["x_max"] = x1_;
  j["y_min"] = y0_;
  j["y_max"] = y1_;
  j["nx"] = nx_;
  j["ny"] = ny_;
  if (mask_) {
    std::vector<int> flat;
    flat.reserve(static_cast<size_t>(nx_) * ny_);
    for (int jj = 0; jj < ny_; ++jj)
      for (int ii = 0; ii < nx_; ++ii) flat.push_back((*mask_)(ii, jj) ? 1 : 0);
    j["mask"] = flat;
  } else {
    j["mask"] = nullptr;
  }
  return j.dump();
}

ChartGrid ChartGrid::from_descriptor_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int nx = j.at("nx").get<int>();
  int ny = j.at("ny").get<int>();
  if (j.contains("mask") && !j.at("mask").is_null()) {
    auto flat = j.at("mask").get<std::vector<int>>();
    if (static_cast<int>(flat.size()) != nx * ny)
      throw GridError("mask length does not match nx*ny");
    ArrB mask(nx, ny);
    size_t k = 0;
    for (int jj = 0; jj < ny; ++jj)
      for (int ii = 0; ii < nx; ++ii) mask(ii, jj) = flat[k++] != 0;
    return ChartGrid(j.at("x_min"), j.at("x_max"), j.at("y_min"), j.at("y_max"),
                     nx, ny, std::move(mask));
  }
  return ChartGrid(j.at("x_min"), j.at("x_max"), j.at("y_min"), j.at("y_max"), nx, ny);
}

}  // namespace qesurf
