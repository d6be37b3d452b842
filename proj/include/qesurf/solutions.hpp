#pragma once

#include "qesurf/qee.hpp"

namespace qesurf {

// Constant-curvature structures on the upper half-plane (charts with y > 0),
// parameters (m, lambda) = (-1, 0).
QEStructure flat_structure(std::shared_ptr<const ChartGrid> grid);        // g = dx^2+dy^2, Xb = dy/y
QEStructure hyperbolic_structure(std::shared_ptr<const ChartGrid> grid);  // g = (dx^2+dy^2)/y^2, Xb = -dy/y

// Vanishing X on the unit round sphere (stereographic chart), an Einstein
// structure with lambda = 1 for any m.
QEStructure sphere_einstein(std::shared_ptr<const ChartGrid> grid);

// P = 0 with a harmonic conformal factor; trivial solution for (-1, 0).
QEStructure harmonic_structure(std::shared_ptr<const ChartGrid> grid,
                               const std::function<double(double, double)>& H);

// Diagonal-gauge presentation built from U = log y with m = -1 (a flat
// structure in adapted coordinates).
QEStructure diagonal_logy_structure(std::shared_ptr<const ChartGrid> grid);

// Round-sphere conformal factor H with 2 e^H = 4/(1+|z|^2)^2.
ArrR round_sphere_H(const ChartGrid& grid);

}  // namespace qesurf
