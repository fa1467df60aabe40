#pragma once

#include "pseudomap/grid.hpp"
#include "pseudomap/poisson.hpp"

namespace pmap {

/// Omega = grad(grad_pot) + curl2(curl_pot) + hpart. The potentials are
/// least-squares projections (gradient potential free with natural boundary
/// behavior, curl potential supported away from the mask edge), which makes
/// the three parts pairwise w-orthogonal to solver precision and the
/// reconstruction exact by construction.
struct HodgeParts {
  ScalarField grad_pot;      // zero weighted mean
  TwoVectorField curl_pot;   // supported on layer >= 4
  VectorField hpart;
  VectorField grad_part() const;
  VectorField curl_part() const;
};

HodgeParts hodge_decompose(const VectorField& omega);

/// Recovers eta with curl2(eta) ~ V for discretely divergence-free V.
/// Throws NotDivergenceFree when the weak divergence of V exceeds tol.
/// Contract: |curl2 eta - V|_w <= 10 tol.
TwoVectorField curl_potential(const VectorField& V, double tol);

/// so(1,1)-valued 1-form Omega = [[0, s],[s, 0]] with s a vector field.
struct So11Field {
  VectorField s;
};

/// Validates an off-diagonal/diagonal split of matrix-valued data: both
/// matrices (one per direction) must be symmetric with zero diagonal.
So11Field so11_from_entries(const ScalarField& a11x, const ScalarField& a12x,
                            const ScalarField& a21x, const ScalarField& a22x,
                            const ScalarField& a11y, const ScalarField& a12y,
                            const ScalarField& a21y, const ScalarField& a22y,
                            double tol = 1e-12);

struct So11Parts {
  ScalarField s1;       // scalar potential: Omega1 = [[0, s1],[s1, 0]]
  TwoVectorField s2;    // 2-vector potential: Omega2 = [[0, s2],[s2, 0]]
  VectorField hpart;    // leftover of the scalar component
};

/// Hodge decomposition of the single independent so(1,1) component.
So11Parts so11_decompose(const So11Field& omega);

}  // namespace pmap
