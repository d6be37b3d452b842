#pragma once

#include <optional>

#include "qesurf/calculus.hpp"
#include "qesurf/residual.hpp"

namespace qesurf {

struct QEParams {
  double m;
  double lambda;
  int n = 2;

  QEParams(double m_, double lambda_, int n_ = 2) : m(m_), lambda(lambda_), n(n_) {
    if (m == 0.0) throw ParameterError("quasi-Einstein parameter m must be nonzero");
    if (n != 2 && n != 3) throw ParameterError("dimension must be 2 or 3");
  }
};

// Metric/vector-field pair on a chart. Conformal structures keep (H, P) for
// the complex-coordinate fast paths; every gauge carries assembled
// (metric, X-flat) data.
struct QEStructure {
  std::shared_ptr<const ChartGrid> grid;
  Gauge gauge = Gauge::General;
  std::optional<ArrR> H;   // conformal: g = 2 e^H (dx^2 + dy^2)
  std::optional<ArrC> P;   // conformal: X-flat = P dz + conj(P) dzbar
  Metric2D g;
  OneForm xflat;
};

QEStructure conformal_structure(std::shared_ptr<const ChartGrid> grid,
                                const ArrR& H, const ArrC& P);
// g = dyU e^{-2U/m} dx^2 + dyU dy^2, X-flat = dyU dy; requires dyU > 0.
QEStructure diagonal_structure(std::shared_ptr<const ChartGrid> grid,
                               const ArrR& U, double m);
QEStructure general_structure(Metric2D g, OneForm xflat);

struct GEHEParams {
  double c;
  ScalarField Lambda;
};

struct ProlongedState {
  OneForm xflat;
  ScalarField omega;  // star(d X-flat)
  ScalarField R;
  Metric2D g;
};

struct KillingAnsatzData {
  ScalarField gamma;  // positive
  OneForm kflat;      // (2/m) Gamma X-flat + d Gamma
};

struct QEEResidual {
  ResidualReport tensor;
  std::vector<ResidualReport> conformal_scalars;  // zz / mixed / zbzb when applicable
};

// Defect of Ric - (1/m) Xb⊗Xb + (1/2) L_X g - lambda g. For conformal
// structures with (m, lambda) = (-1, 0) the three complex-coordinate scalar
// residuals are reported as well.
QEEResidual qee_residual(const QEStructure& s, const QEParams& p);

// Defect of L_X g + c Xb⊗Xb + Lambda g.
ResidualReport gehe_residual(const QEStructure& s, const GEHEParams& gp);

ProlongedState prolong(const QEStructure& s);

struct ProlongationResiduals {
  ResidualReport closed_gradient;   // first-order closed system, tensor part
  ResidualReport closed_domega;     // dOmega equation
  ResidualReport constraint_scalar;
  ResidualReport constraint_oneform;
};
ProlongationResiduals prolongation_residuals(const ProlongedState& st, const QEParams& p);

KillingAnsatzData killing_ansatz(const QEStructure& s, const ScalarField& gamma,
                                 const QEParams& p);

// Divergence identity satisfied by any structure solving the equations;
// requires m != 2 and an already-certified structure.
ResidualReport identity_residual(const QEStructure& s, const KillingAnsatzData& k,
                                 const QEParams& p);

// A = -|K|^2/(2 Gamma) + (1/2) lap Gamma + lambda Gamma
//     + (m-2)/(4 Gamma) |grad Gamma|^2, plus its max deviation from the mean.
// m and lambda are raw reals: warped-product base checks use m_base = m+1,
// which may be zero.
struct GauduchonConstant {
  ScalarField A;
  double mean = 0.0;
  double deviation = 0.0;
};
GauduchonConstant gauduchon_constant(const QEStructure& s, const KillingAnsatzData& k,
                                     double m, double lambda);

// Winding number of the vector dual to xflat around a circle.
int zero_index(const OneForm& xflat, const Metric2D& g,
               double cx, double cy, double radius, int samples = 512);

// Builds F with dzbar F = conj(P) by path integration of X-flat (closedness
// is verified first) and returns sup |dzbar( e^{cF/2 - H} conj(P) )|.
ResidualReport holomorphy_test(const QEStructure& s, double c);

}  // namespace qesurf
