#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "pseudomap/grid.hpp"
#include "pseudomap/poisson.hpp"
#include "pseudomap/signature.hpp"

namespace pmap {

/// Grid-sampled map u : B -> R^{n+1} constrained to u^T E u = level.
struct DiscMap {
  GridPtr grid;
  std::vector<Eigen::ArrayXd> u;
  QuadricSpec quadric;

  DiscMap(GridPtr g, QuadricSpec q)
      : grid(std::move(g)), quadric(std::move(q)) {
    u.assign(quadric.sig.dim(), Eigen::ArrayXd::Zero(grid->num_nodes()));
  }

  int dim() const { return quadric.sig.dim(); }
  Eigen::VectorXd at(int k) const {
    Eigen::VectorXd v(dim());
    for (int i = 0; i < dim(); ++i) v[i] = u[i][k];
    return v;
  }
  void set(int k, const Eigen::VectorXd& v) {
    for (int i = 0; i < dim(); ++i) u[i][k] = v[i];
  }
  /// max over nodes of |u^T E u - level|.
  double constraint_defect() const;
  /// Projects every node onto the quadric (throws NullConeViolation).
  void project_all(double cone_tol = 1e-10);

  /// Samples an analytic map and projects it onto the quadric.
  static DiscMap sample(GridPtr g, const QuadricSpec& q,
                        const std::function<Eigen::VectorXd(double, double)>& f,
                        bool project = true);
};

/// Theta^{ij} = u^i grad u^j - u^j grad u^i, stored for i < j
/// (antisymmetric in (i,j) exactly).
struct ThetaField {
  GridPtr grid;
  int dim = 0;
  std::vector<Eigen::ArrayXd> tx, ty;  // pair-indexed

  int pair_index(int i, int j) const {  // requires i < j
    return (i * (2 * dim - i - 1)) / 2 + (j - i - 1);
  }
  double get(int i, int j, int d, int k) const {
    if (i == j) return 0.0;
    const double sign = i < j ? 1.0 : -1.0;
    const int pi = i < j ? pair_index(i, j) : pair_index(j, i);
    return sign * (d == 0 ? tx[pi][k] : ty[pi][k]);
  }
};

double energy(const DiscMap& m);

ThetaField theta(const DiscMap& m);

/// Euler-Lagrange residuals of -div grad u = Theta E . grad u, per component,
/// in both the Theta form and the equivalent lambda form
/// -lap u = lambda u with lambda = (grad u)^T E grad u. The two forms agree
/// up to O(h) truncation on constrained maps.
struct ElResidual {
  std::vector<Eigen::ArrayXd> theta_form;
  std::vector<Eigen::ArrayXd> lambda_form;
  double discrepancy_max = 0;  // over interior nodes
};
ElResidual el_residual(const DiscMap& m);

/// Boundary data: ambient-space values as a function of position on the disc.
using BoundaryClosure = std::function<Eigen::VectorXd(double, double)>;

struct SolverConfig {
  double damping = 0.5;
  int max_iters = 5000;
  double residual_tol = 1e-8;       // weighted-L2 of the projected update step
  double constraint_tol = 1e-12;
  double boundary_mismatch_tol = 1e-8;
  double cone_tol = 1e-10;
  int max_damping_halvings = 6;
};

struct ConvergenceReport {
  bool converged = false;
  int iterations = 0;
  double final_residual = 0;     // fixed-point step norm |project(u+damping d)-u|_w/damping
  double final_el_residual = 0;  // weighted-L2 of the Theta-form EL residual
  double damping_used = 0;
  int damping_halvings = 0;
  std::vector<double> residual_trace;  // step norms
};

/// Damped Picard iteration on the EL system with quadric projection:
/// u <- project(u + damping * delta), lap delta = el_residual(u), delta|bd = 0.
/// The energy is indefinite for nu >= 1 so this is residual-driven, not a
/// descent method; non-convergence is a reported outcome.
///
/// Stopping: the projected-step norm, the quantity the fixed-point iteration
/// actually controls. With the constraint enforced exactly the full EL
/// residual keeps an O(h^2) radial compatibility floor (the continuum radial
/// identity holds only to truncation), which is reported separately.
std::pair<DiscMap, ConvergenceReport> solve(const BoundaryClosure& g, const QuadricSpec& q,
                                            const SolverConfig& cfg, GridPtr grid);

/// Solves into H^n_nu by conjugating a pseudosphere solve with the
/// anti-isometry sigma; the result satisfies u^T F u = -1.
std::pair<DiscMap, ConvergenceReport> solve_pseudohyperbolic(const BoundaryClosure& g, int nu,
                                                             int n, const SolverConfig& cfg,
                                                             GridPtr grid);

// Built-in boundary data.
/// Exact S^1_1 harmonic map trace (sinh(ax+by), cosh(ax+by)).
BoundaryClosure boundary_s11_exact(double a, double b);
/// Cap loop of opening r0: for S^2 the constant-latitude circle around the
/// pole, for S^2_1 the loop (sinh w, cosh w sin p, cosh w cos p) with
/// w = r0 cos(theta), p = r0 sin(theta).
BoundaryClosure boundary_cap(const QuadricSpec& q, double r0);
BoundaryClosure boundary_constant(const Eigen::VectorXd& v);
/// Constant-latitude loop on the upper sheet of H^2_0 (hyperbolic plane):
/// (cosh r0, sinh r0 cos theta, sinh r0 sin theta).
BoundaryClosure boundary_h2_cap(double r0);

}  // namespace pmap
