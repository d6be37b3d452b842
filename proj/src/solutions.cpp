#include "qesurf/solutions.hpp"

#include <cmath>

namespace qesurf {

namespace {

void require_upper_half(const ChartGrid& g) {
  if (g.y_min() <= 0.0)
    throw DomainError("structure lives on the upper half-plane y > 0");
}

}  // namespace

QEStructure flat_structure(std::shared_ptr<const ChartGrid> grid) {
  require_upper_half(*grid);
  ArrR H = ArrR::Constant(grid->nx(), grid->ny(), -std::log(2.0));
  ArrC P(grid->nx(), grid->ny());
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i)
      P(i, j) = Complex(0.0, -0.5 / grid->y(j));
  return conformal_structure(grid, H, P);
}

QEStructure hyperbolic_structure(std::shared_ptr<const ChartGrid> grid) {
  require_upper_half(*grid);
  ArrR H(grid->nx(), grid->ny());
  ArrC P(grid->nx(), grid->ny());
  for (int j = 0; j < grid->ny(); ++j) {
    double y = grid->y(j);
    for (int i = 0; i < grid->nx(); ++i) {
      H(i, j) = -std::log(2.0 * y * y);
      P(i, j) = Complex(0.0, 0.5 / y);
    }
  }
  return conformal_structure(grid, H, P);
}

ArrR round_sphere_H(const ChartGrid& grid) {
  ArrR H(grid.nx(), grid.ny());
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      double r2 = grid.x(i) * grid.x(i) + grid.y(j) * grid.y(j);
      H(i, j) = std::log(2.0) - 2.0 * std::log1p(r2);
    }
  return H;
}

QEStructure sphere_einstein(std::shared_ptr<const ChartGrid> grid) {
  ArrR H = round_sphere_H(*grid);
  ArrC P = ArrC::Zero(grid->nx(), grid->ny());
  return conformal_structure(grid, H, P);
}

QEStructure harmonic_structure(std::shared_ptr<const ChartGrid> grid,
                               const std::function<double(double, double)>& H) {
  ArrR Ha(grid->nx(), grid->ny());
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i) Ha(i, j) = H(grid->x(i), grid->y(j));
  return conformal_structure(grid, Ha, ArrC::Zero(grid->nx(), grid->ny()));
}

QEStructure diagonal_logy_structure(std::shared_ptr<const ChartGrid> grid) {
  require_upper_half(*grid);
  // U = (1/2) log(2y) presents the flat solution in the adapted coordinates
  // where the Kaehler potential of X/|X|^2 is the second coordinate.
  ArrR U(grid->nx(), grid->ny());
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i) U(i, j) = 0.5 * std::log(2.0 * grid->y(j));
  return diagonal_structure(grid, U, -1.0);
}

}  // namespace qesurf
