#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "pseudomap/grid.hpp"
#include "pseudomap/poisson.hpp"
#include "pseudomap/stationary_target.hpp"

namespace pmap {

/// beta(u) (grad t + omega_i(u) grad u^i): the conserved current of the
/// timelike Killing field.
VectorField lorentz_current(const ScalarField& t, const std::vector<Eigen::ArrayXd>& u,
                            const StationaryTarget& target);

/// Lagrangian -1/2 int beta(u)|grad t + omega grad u|^2 + 1/2 int |grad u|^2.
double lorentz_energy(const ScalarField& t, const std::vector<Eigen::ArrayXd>& u,
                      const StationaryTarget& target);

/// H^j = beta (grad t + omega grad u) . grad u^k (dw_j/dy^k - dw_k/dy^j)
///       - 1/2 dbeta/dy^j |grad t + omega grad u|^2.
/// Exposed separately so tests can feed analytic gradients through the same
/// evaluation path.
std::vector<Eigen::ArrayXd> lorentz_H(const ScalarField& t, const std::vector<Eigen::ArrayXd>& u,
                                      const StationaryTarget& target);

/// Euler-Lagrange residuals: t_eq is div of the current; u_eq is
/// -lap u - nu_l (grad nu_l . grad u) + H - <H,nu_l> nu_l.
struct LorentzResidual {
  ScalarField t_eq;
  std::vector<Eigen::ArrayXd> u_eq;
};
LorentzResidual el_residual_lorentz(const ScalarField& t, const std::vector<Eigen::ArrayXd>& u,
                                    const StationaryTarget& target);

/// The fields of the assembled elliptic system, all stored as per-node
/// scalar arrays (block matrices row-major, block size n+1 with the t-row
/// first). Theta is antisymmetric with zero first row and column; zeta is the
/// diagonal repetition of eta and is kept implicit.
struct AssembledSystem {
  GridPtr grid;
  int n = 0;
  std::vector<Eigen::ArrayXd> theta_x, theta_y;  // (n+1)^2
  std::vector<Eigen::ArrayXd> a;                 // n*n
  std::vector<Eigen::ArrayXd> b;                 // n
  std::vector<Eigen::ArrayXd> Q;                 // (n+1)^2
  std::vector<Eigen::ArrayXd> F;                 // (n+1)^2
  std::vector<Eigen::ArrayXd> H;                 // n
  TwoVectorField eta;
  VectorField current;
};

AssembledSystem assemble_system(const ScalarField& t, const std::vector<Eigen::ArrayXd>& u,
                                const StationaryTarget& target);

/// Row residuals of the assembled system:
/// -div(Q gradU) - Theta . Q gradU - F curl(zeta) . Q gradU.
std::vector<Eigen::ArrayXd> assembled_residual(const AssembledSystem& sys, const ScalarField& t,
                                               const std::vector<Eigen::ArrayXd>& u);

struct BoundReport {
  double Q_frob_max = 0;
  double Qinv_frob_max = 0;
  double F_frob_max = 0;
  double qinv_closed_form_defect = 0;
  double theta_m22 = 0, gradF_m22 = 0, gradQ_m22 = 0, curlzeta_m22 = 0;
  double base_m22 = 0;  // |grad t|_{M^2_2} + |grad u|_{M^2_2}
  double theta_ratio = 0, gradF_ratio = 0, gradQ_ratio = 0, curlzeta_ratio = 0;
};
BoundReport bound_check(const AssembledSystem& sys, const ScalarField& t,
                        const std::vector<Eigen::ArrayXd>& u, const StationaryTarget& target);

struct LorentzMap {
  ScalarField t;
  std::vector<Eigen::ArrayXd> u;
};

struct LorentzSolverConfig {
  double damping = 0.5;
  int max_iters = 2000;
  double residual_tol = 1e-7;
  int max_damping_halvings = 6;
};

struct LorentzSolveReport {
  bool converged = false;
  int iterations = 0;
  double u_residual = 0;
  double t_increment = 0;
  double damping_used = 0;
  int damping_halvings = 0;
  std::vector<double> residual_trace;
};

/// Damped Picard on (3.9)-(3.10): a variable-coefficient divergence-form
/// solve for t alternating with a projected update for u.
std::pair<LorentzMap, LorentzSolveReport> solve_lorentz(
    const std::function<double(double, double)>& t_g,
    const std::function<Eigen::VectorXd(double, double)>& u_g, const StationaryTarget& target,
    const LorentzSolverConfig& cfg, GridPtr grid);

/// max / L2 difference over core nodes between the assembled-system residual
/// and the direct Euler-Lagrange residuals (the two routes agree up to O(h)).
struct TwoRouteDiff {
  double linf = 0;
  double l2 = 0;
};
TwoRouteDiff two_route_consistency(const ScalarField& t, const std::vector<Eigen::ArrayXd>& u,
                                   const StationaryTarget& target);

}  // namespace pmap
