#pragma once

#include <functional>
#include <memory>
#include <variant>

#include "pseudomap/grid.hpp"

namespace pmap {

struct DirichletBC {
  std::function<double(double, double)> g;
};
struct NeumannBC {
  std::function<double(double, double)> g;
};
using BoundaryCondition = std::variant<DirichletBC, NeumannBC>;

/// Direct (sparse LDLT) solvers on a fixed grid with cached factorizations.
/// All solves are deterministic; one step of iterative refinement keeps the
/// discrete residual near machine precision.
class PoissonSolver {
 public:
  explicit PoissonSolver(GridPtr grid);

  GridPtr grid() const;

  /// Solves lap u = rhs at interior nodes, u = bdata at layer-1 nodes.
  /// Residual contract: |lap_h u - rhs|_inf <= solver_tol * max(1, |rhs|_inf).
  ScalarField solve_dirichlet(const ScalarField& rhs, const ScalarField& bdata) const;
  ScalarField solve_dirichlet(const ScalarField& rhs,
                              const std::function<double(double, double)>& g) const;

  /// Weak Neumann problem: zero-mean u with
  ///   <grad u, grad phi>_w = -<rhs, phi>_w + sum_b arc(b) g(b) phi(b)
  /// for all nodal phi. The compatibility defect is projected out.
  ScalarField solve_neumann(const ScalarField& rhs,
                            const std::function<double(double, double)>& g) const;

  /// Zero-mean alpha minimizing ||V - grad alpha||_w over all nodal alpha
  /// (the flux form of the weak Neumann problem: lap a = div V, da/dn = V.n).
  ScalarField gradient_potential(const VectorField& V) const;

  /// beta minimizing ||V - curl2 beta||_w over potentials supported at
  /// layer >= 4. The support margin keeps im(grad) and im(curl2|supp)
  /// w-orthogonal to roundoff, which fixes the Hodge splitting.
  TwoVectorField curl_stream_potential(const VectorField& V) const;

  static constexpr double solver_tol = 1e-10;

  /// Shared per-grid instance (factorizations are expensive).
  static std::shared_ptr<const PoissonSolver> shared_for(const GridPtr& grid);

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

ScalarField poisson_solve(const ScalarField& rhs, const BoundaryCondition& bc);

/// Solves div(c grad u) = rhs at interior nodes with u = bdata at layer-1
/// nodes; face coefficients are harmonic means of nodal c. Used for the
/// t-equation of the Lorentzian system. Factorizes per call.
ScalarField divform_dirichlet_solve(const ScalarField& c, const ScalarField& rhs,
                                    const ScalarField& bdata);

}  // namespace pmap
