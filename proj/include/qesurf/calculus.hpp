#pragma once

#include <utility>
#include <vector>

#include "qesurf/field.hpp"
#include "qesurf/stencil.hpp"

namespace qesurf {

enum class Axis { X, Y };

// High-order finite-difference derivative along a grid axis. On masked grids
// each valid run of a line is differentiated separately; runs shorter than 5
// points raise DomainError.
ScalarField diff(const ScalarField& f, Axis axis, int order);
ArrR diff(std::shared_ptr<const ChartGrid> grid, const ArrR& f, Axis axis, int order);

// (d/dz, d/dzbar) with z = x + i y.
std::pair<ScalarField, ScalarField> wirtinger(const ScalarField& f);

// Inverse metric components.
struct InverseMetric {
  ArrR ixx, ixy, iyy;
};
InverseMetric inverse_metric(const Metric2D& g);

// Christoffel symbols of the Levi-Civita connection.
struct Christoffels {
  ArrR xxx, xxy, xyy;  // Gamma^x_{xx}, Gamma^x_{xy}, Gamma^x_{yy}
  ArrR yxx, yxy, yyy;  // Gamma^y_{..}
};
Christoffels christoffels(const Metric2D& g);

// Scalar curvature; conformal gauge uses R = -2 e^{-H} dz dzbar H, other
// gauges go through the Christoffel symbols.
ScalarField scalar_curvature(const Metric2D& g);
ScalarField scalar_curvature_general(const Metric2D& g);  // Christoffel route

// Hodge star on 1-forms, (x, y) positively oriented. Conformal metrics take
// the factor-free rotation path (exactly independent of H).
OneForm hodge_star(const OneForm& a, const Metric2D& g);

// Scalar star(d a) of a 1-form: (dx a_y - dy a_x) / sqrt(det g).
ScalarField star_d(const OneForm& a, const Metric2D& g);

// Exterior derivative coefficient of a 1-form: d a = (dx a_y - dy a_x) dx^dy.
ScalarField d_of_oneform(const OneForm& a);

// Metric Laplacian of a scalar field.
ScalarField laplacian(const Metric2D& g, const ScalarField& f);

// Covariant derivative (nabla_a f_b) of a 1-form; four components.
struct CovariantOneForm {
  ArrC xx, xy, yx, yy;  // nabla_x a_x, nabla_x a_y, nabla_y a_x, nabla_y a_y
};
CovariantOneForm covariant_derivative(const Metric2D& g, const OneForm& a);

// Hessian of a scalar (nabla_a nabla_b f).
struct SymTensor {
  ArrC xx, xy, yy;
};
SymTensor hessian(const Metric2D& g, const ScalarField& f);

// Raise the index of a 1-form: vector components (a^x, a^y).
std::pair<ArrC, ArrC> raise(const Metric2D& g, const OneForm& a);

// g^{ab} a_b b_a pointwise.
ArrC metric_pairing(const Metric2D& g, const OneForm& a, const OneForm& b);

// Divergence of a vector field given by raised components.
ScalarField divergence(const Metric2D& g, const ArrC& vx, const ArrC& vy);

// Axis-aligned polyline through grid nodes.
struct Polyline {
  std::vector<std::pair<double, double>> vertices;
};

// Path integral of a 1-form along an axis-aligned node polyline.
Complex line_integrate(const OneForm& a, const Polyline& path);

// Potential f with df = a, anchored f(base) = value0, built from cumulative
// integrals along the base row and then along every column. Exact for closed
// forms up to quadrature error.
ScalarField potential_from_oneform(const OneForm& a, int i0, int j0, Complex value0);

}  // namespace qesurf
