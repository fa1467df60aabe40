#pragma once

#include <functional>
#include <random>

#include "pseudomap/signature.hpp"

namespace pmap {

/// Seeded low-order trigonometric polynomial; the same generator state gives
/// the same continuum function on every grid, so refinement studies sample
/// one fixed function.
std::function<double(double, double)> synthetic_trig(std::mt19937& rng, double amplitude = 1.0);

/// Base point on the quadric plus seeded trig perturbations, projected back
/// onto the quadric pointwise. Smooth, constrained, generically non-harmonic.
std::function<Eigen::VectorXd(double, double)> synthetic_constrained_map(
    std::mt19937& rng, const QuadricSpec& q, double amplitude);

}  // namespace pmap
