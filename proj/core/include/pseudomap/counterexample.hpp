#pragma once

#include <string>
#include <vector>

#include "pseudomap/conservation.hpp"
#include "pseudomap/hodge.hpp"

namespace pmap {

/// The unbounded W^{1,2} weak solution u1 = u2 = s = loglog(2/|x|) of
/// -div grad u = Omega . grad u with Omega = [[0, grad s],[grad s, 0]].
struct SingularSolution {
  GridPtr grid;
  ScalarField s;
  std::vector<Eigen::ArrayXd> u;  // two components, both equal to s
  So11Field omega;                // off-diagonal component: discrete grad s
};

double loglog_value(double r);      // loglog(2/r)
double loglog_laplacian(double r);  // lap of loglog(2/|x|) = -1/(r^2 log^2(2/r))

/// Requires a grid that avoids the origin (punctured or offset lattice).
SingularSolution build_singular(GridPtr grid);

struct WeakTestResult {
  std::string label;
  double defect;      // |int grad u . grad phi - int (Omega . grad u) phi|
  double normalized;  // defect / (|grad phi|_L2 + |phi|_L2)
};

struct WeakSolutionReport {
  std::vector<WeakTestResult> tests;  // fixed bump basis, both components
  double max_normalized = 0;
  double pointwise_rel_error_at_half = 0;  // -lap u1 vs 1/(r^2 log^2(2/r)) near r=0.5
};

/// Weak-form residual against a fixed basis of smooth bumps (three centers,
/// three scales, analytic gradients) plus the pointwise Laplacian check.
WeakSolutionReport verify_weak_solution(const SingularSolution& sol);

struct UnboundednessRow {
  double h = 0;
  double max_abs_u = 0;
  double grad_l2 = 0;
  std::string mode;  // "grid" or "sampled"
};

/// Rows (h, max |u|, |grad u|_L2). Grid rows measure the discrete fields on a
/// punctured lattice; sampled rows evaluate the radial profile at the lattice
/// resolution h (nearest node at distance h) with the closed-form gradient
/// integral cut off at r = h, for resolutions no full grid can hold.
std::vector<UnboundednessRow> unboundedness_report(const std::vector<double>& grid_hs,
                                                   const std::vector<double>& sampled_hs);

/// e^{Omega1} = [[cosh s, sinh s],[sinh s, cosh s]]; guards |s| > 700.
struct So11Exp {
  GridPtr grid;
  Eigen::ArrayXd ch, sh;
};
So11Exp exp_so11(const ScalarField& s);

/// max over core nodes of |grad(e^{Omega1}) - e^{Omega1} grad Omega1|
/// (the so(1,1) commutation identity; O(h^2) for smooth s).
double commutation_defect(const ScalarField& s);

struct TransformedReport {
  ResidualReport residual;   // of -div(e^{Omega1} grad u) = e^{Omega1} curl Omega2 . grad u
  double commutation_max = 0;
};

/// Residual of the transformed system on the annulus 0.25 <= |x| <= 0.75;
/// omega2 is the 2-vector potential from so11_decompose (near zero for the
/// singular example).
TransformedReport transformed_residual(const SingularSolution& sol,
                                       const TwoVectorField& omega2);

}  // namespace pmap
