#pragma once

#include <Eigen/Dense>
#include <functional>
#include <random>

#include "pseudomap/grid.hpp"
#include "pseudomap/maps.hpp"

namespace oracles {

/// Adaptive Simpson quadrature; independent 1-D oracle for radial integrals.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int depth = 24);

/// Random smooth scalar field: a low-order trigonometric polynomial with
/// seeded coefficients. The same seed gives the same continuum function on
/// every grid, so refinement studies see one fixed function.
std::function<double(double, double)> random_trig(std::mt19937& rng, double amplitude = 1.0);

/// Random constrained map: base point plus trig-polynomial perturbations,
/// projected to the quadric.
std::function<Eigen::VectorXd(double, double)> random_constrained_map(std::mt19937& rng,
                                                                      const pmap::QuadricSpec& q,
                                                                      double amplitude);

/// Independent projected-gradient-descent harmonic map solver for the round
/// sphere (definite case only); explicit Euler heat flow with projection,
/// iterated to a tight fixed point. Tests use it as the oracle against the
/// damped Picard solver.
pmap::DiscMap pgd_sphere_harmonic(const pmap::BoundaryClosure& g, int n, pmap::GridPtr grid,
                                  double tol = 1e-11, int max_iters = 2000000);

}  // namespace oracles
