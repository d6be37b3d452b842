#pragma once

#include <array>
#include <vector>

#include "qesurf/qee.hpp"

namespace qesurf {

// Connection 1-form A = Az dz + Azb dzbar with 2x2 traceless coefficients.
struct MatrixConnection {
  Mat2Field Az, Azb;
};

// Higgs field Phi = Phiz dz.
struct HiggsField {
  Mat2Field Phiz;
};

struct HitchinPair {
  MatrixConnection A;
  HiggsField Phi;
  ScalarField H;  // conformal factor of the background structure
};

// Traceless flat connection of the adapted trivialization.
MatrixConnection flat_connection(const QEStructure& s);

// The d + U presentation in the coordinate trivialization of the tangent
// bundle; gauge e^{H/2} Id carries it to flat_connection.
MatrixConnection projective_connection(const QEStructure& s);

// F coefficient of dz^dzbar: dz(Azb) - dzb(Az) + [Az, Azb].
Mat2Field curvature_of(const MatrixConnection& A);

HitchinPair hitchin_pair(const QEStructure& s);

// The constant-curvature pair on the upper half-plane.
HitchinPair canonical_pair(std::shared_ptr<const ChartGrid> grid);

struct HitchinResidual {
  ResidualReport curvature;   // F + [Phi, Phi*]
  ResidualReport holomorphy;  // dzb Phi + [Azb, Phi]
};
HitchinResidual hitchin_residual(const HitchinPair& p);

HitchinPair gauge_transform(const HitchinPair& p, const Mat2Field& gamma);
MatrixConnection gauge_transform(const MatrixConnection& A, const Mat2Field& gamma);

// Commutator of the spectral pair applied to probe sections; vanishes at all
// spectral values exactly when the structure solves the equations.
ResidualReport lax_commutator(const QEStructure& s,
                              const std::vector<Complex>& lambda_samples);

// Commutator applied to one probe section (0: constant, 1: (z,0), 2: (0,zb)),
// returned per component for spectral-polynomial checks.
std::array<ScalarField, 2> lax_commutator_section(const QEStructure& s,
                                                  Complex lambda, int section);

struct ThetaField {
  ScalarField theta;  // real-valued, chart must satisfy y > 0
};

// sup | y^2 lap Theta + y (sin Theta dy Theta + cos Theta dx Theta) + cos Theta |
ResidualReport theta_residual(const ThetaField& t);

struct ThetaSolveConfig {
  int max_iter = 50;
  double tol = 1e-10;
  int damping_max_halvings = 8;

  std::string to_json() const;
  static ThetaSolveConfig from_json(const std::string& text);
};

struct ThetaSolveResult {
  ThetaField theta;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Damped Newton iteration with the analytic linearization; the boundary rows
// of `init` are the Dirichlet data, the interior is the starting iterate.
ThetaSolveResult theta_solve(const ScalarField& init, const ThetaSolveConfig& cfg = {});

struct ReconstructedH {
  ScalarField H;
  double compatibility;  // sup of the mixed-partial defect
};

// Integrates dH = (-dyTheta + cos Theta / y) dx + (dxTheta + sin Theta / y - 1/y) dy
// from the given anchor node.
ReconstructedH reconstruct_H(const ThetaField& t, int i0, int j0, double H0);

// Conformal structure with P = e^{-i Theta} / (2y) and H reconstructed.
QEStructure structure_from_theta(const ThetaField& t, double H0);

// sup | R_h + 2 | for h = |X|^2 g.
ResidualReport curvature_certificate(const QEStructure& s);

// Defect of the integrability condition for the logarithm Q = log P:
// dz dzb (Q - conj Q) = e^{conj Q} dz conj Q - e^{Q} dzb Q.
ResidualReport imQ_residual(const QEStructure& s);

// Continuous branch of log P anchored at the grid center.
ScalarField log_branch(const ScalarField& P);

}  // namespace qesurf
