#pragma once

#include "qesurf/qee.hpp"

namespace qesurf {

// Weyl frame (g, omega, Lambda) on a chart. The S^1 component of omega is
// carried separately; every field is independent of the fiber coordinate.
struct WeylFrame {
  Metric2D g;
  OneForm omega;
  ScalarField omega_t;
  ScalarField Lambda;
  ScalarField log_gtt;  // fiber metric component; updated by frame changes
  int n = 3;
};

// (e^u g, omega + du, Lambda') with
// Lambda' = e^{-u} (Lambda - lap u / 2 + L_X u / 2), X-flat = (n-2)/2 omega.
WeylFrame frame_change(const WeylFrame& f, const ScalarField& u);

struct MobiusMap {
  Complex a, b, c, d;  // ad - bc normalized to 1

  MobiusMap(Complex a_, Complex b_, Complex c_, Complex d_);
  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;

  MobiusMap compose(const MobiusMap& inner) const;  // this ∘ inner
  // The same sphere map expressed in the antipodal chart w = 1/z.
  MobiusMap second_patch() const;

  static MobiusMap identity();
  static MobiusMap scaling(double k);    // z -> k z
  static MobiusMap inversion();          // z -> 1/z

  std::string to_json() const;
  static MobiusMap from_json(const std::string& text);
};

// Round metric of the unit sphere on a stereographic chart.
Metric2D round_sphere_metric(std::shared_ptr<const ChartGrid> grid);

// Conformal factor e^u = (1/lambda) ((1+|z|^2)/(|az+b|^2+|cz+d|^2))^2,
// the pullback factor of the Moebius map scaled to curvature 2 lambda.
ScalarField mobius_u(const MobiusMap& f, double lambda,
                     std::shared_ptr<const ChartGrid> grid);
double mobius_u_value(const MobiusMap& f, double lambda, Complex z);

// sup | lap_{S^2} u - 2 + 2 lambda e^u | on the stereographic chart.
ResidualReport constcurv_residual(const ScalarField& u, double lambda);

// sup-norm of lap_{g0} u - 2 Lambda - L_K u + 2 lambda e^u.
ResidualReport kw_residual(const ScalarField& u, const ScalarField& Lambda,
                           double lambda, const OneForm& k_flat,
                           const Metric2D& g0);

// Product-fiber data: g = g_base + e^{-2u/m} dt^2, X-flat = dt + du, with the
// base carrying parameters (m+1, lambda) and X_base = ((m+1)/m) du.
struct WarpedProductSpec {
  Metric2D g_base;
  ScalarField u;
  double m;
  double lambda;
};

// Conformally scaled product g = e^u (g_{S^2} + dt^2), X-flat = dt + du/2.
struct WarpedStructure3D {
  std::shared_ptr<const ChartGrid> grid;
  ScalarField u;
  double lambda;

  Metric2D base_metric() const;   // e^u times the round chart metric
  OneForm xflat_2d() const;       // du/2
};

WarpedStructure3D s2xs1_structure(const MobiusMap& f, double lambda,
                                  std::shared_ptr<const ChartGrid> grid);

// Normal form of the scaled product: base e^u g_{S^2}, potential u/2, m = -1.
WarpedProductSpec to_normal_form(const WarpedStructure3D& w);

struct WarpedResiduals {
  ResidualReport tangential;  // base block of the field equations
  ResidualReport fiber;       // tt block
  ResidualReport potential;   // scalar equation fixing the zero of u
  double u_shift = 0.0;       // applied shift when normalization is requested
};

WarpedResiduals warped_residual(const WarpedProductSpec& spec,
                                bool normalize_shift = false);
WarpedResiduals warped_residual(const WarpedStructure3D& w);

// Gradient solution of the generalised horizon equations on the sphere chart:
// g = e^u g_{S^2}, X-flat = du/2, c = 2, Lambda fixed by the trace.
struct GehePatch {
  QEStructure structure;
  ScalarField Lambda;
  double c = 2.0;
};
GehePatch mobius_gehe_patch(const MobiusMap& f, double lambda,
                            std::shared_ptr<const ChartGrid> grid);

}  // namespace qesurf
