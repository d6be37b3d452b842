#pragma once

#include <array>

#include "qesurf/qee.hpp"

namespace qesurf {

// Parameters of the generalized hypergeometric series 3F2(a1,a2,a3;b1,b2;z).
struct SeriesSpec {
  Complex a1, a2, a3, b1, b2;
  Complex z;
};

struct HypValue {
  Complex f, df, d2f, d3f;
};

// Direct series for |z| < 1 (relative tolerance 1e-14, at most 500 terms);
// real z beyond the disk is reached by integrating the third-order
// hypergeometric ODE along a path indented into the lower half-plane, which
// realizes the branch rules sqrt(1-z) = i sqrt(z-1) and
// arcsin(sqrt z) = pi/2 - i arcsinh(sqrt(z-1)).
Complex eval_3f2(const SeriesSpec& spec);
HypValue eval_3f2_with_derivatives(const SeriesSpec& spec);

// Solution basis of the third-order reduction ODE in the variable z = x/alpha,
// with values and two derivatives. nu = 1/alpha; sqrt(nu) = i sqrt(-nu) for
// nu < 0. Half-integer sqrt(nu) and alpha = 0 sit in an unsupported regime.
struct BasisValues {
  std::array<Complex, 3> C, Cp, Cpp, Cppp;
};
BasisValues hyp_basis(Complex nu, Complex z);

struct HypParams {
  double alpha = 1.0;         // nu = 1/alpha
  Complex beta, gamma, delta; // coefficients of C = beta C1 + gamma C2 + delta C3
};

// Quadratic first-integral constraint: -beta^2/4 + 4 nu (1-4 nu) gamma delta.
Complex hyp_constraint(const HypParams& p);

// Coefficients with gamma = conj(delta) made real on z in (0,1), or matched to
// a real solution beyond z = 1 by zeroing Im C and Im C' at an anchor point
// together with the quadratic constraint.
HypParams find_real_coefficients(double alpha, double beta, double z_anchor);

// sup of the third-order linear operator applied to a uniformly sampled C.
ResidualReport dalpha_residual(const Eigen::VectorXcd& C, const Eigen::VectorXd& x,
                               double alpha);
// sup of the quadratic second-order operator applied to a sampled C.
ResidualReport lalpha_residual(const Eigen::VectorXcd& C, const Eigen::VectorXd& x,
                               double alpha);
// the quadratic operator evaluated from analytic derivative samples
Eigen::VectorXcd lalpha_values(const Eigen::VectorXcd& C, const Eigen::VectorXcd& Cp,
                               const Eigen::VectorXcd& Cpp, const Eigen::VectorXd& x,
                               double alpha);

// Homothety reduction: Z'' solved from the second-order ODE and integrated
// adaptively from s = 0; the structure is assembled on an (r, s) chart with
// g = e^r Z ((1+s^2) dr^2 + 2(s+V) dr ds + (V^2+1) ds^2), V = Z/(m+sZ),
// X-flat = Z (s dr + ds).
struct HomothetySolution {
  double m = 0;
  Eigen::VectorXd s;
  Eigen::VectorXd Z;
  QEStructure structure;  // general gauge on the (r, s) chart
};

HomothetySolution homothety_integrate(double m, double Z0, double Zp0,
                                      double s_min, double s_max, int ns,
                                      double r_min = 0.0, double r_max = 1.0,
                                      int nr = 65);

// residual of the reduction ODE for a constant Z (detects that no constant
// solutions exist)
double homothety_ode_defect(double m, double Z, double Zp, double Zpp, double s);

// One-parameter family g = e^y (f^2+t^2+1) (4/(1+t^2)^2 dt^2 + dy^2) with
// f(t) = arcsinh(t) + beta, on a (t, y) chart.
QEStructure explicit_family(double beta, double t_min, double t_max, int nt,
                            double y_min = 0.0, double y_max = 1.0, int ny = 65);

// Closed-form solution of the third-order reduction at alpha = 1 on x > 1,
// assembled into g = e^y C'(x) (dx^2/(x-1) + x^2 dy^2) with its vector field.
// The quadratic constraint b^2 = 4ac is enforced on construction.
struct Alpha1Solution {
  double a, b, c;
  Eigen::VectorXd x;
  Eigen::VectorXd C, Cp, Cpp;
  QEStructure structure;
};

Alpha1Solution alpha1_solution(double a, double b, double c,
                               double x_min, double x_max, int nx,
                               double y_min = 0.0, double y_max = 1.0, int ny = 65);

// closed-form sample of the alpha = 1 solution and derivatives at one x > 1
void alpha1_closed_form(double a, double b, double c, double x,
                        double& C, double& Cp, double& Cpp);

}  // namespace qesurf
