#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pseudomap/lorentz.hpp"
#include "pseudomap/maps.hpp"
#include "pseudomap/norms.hpp"

namespace pmap {

/// Residual report emitted as JSON {law, norm_max, norm_l1, h, order_estimate}.
/// Norms are taken over nodes at least two layers inside the mask edge
/// (layer >= 3), away from cut-cell noise.
struct ResidualReport {
  std::string law;
  double norm_max = 0;
  double norm_l1 = 0;
  double h = 0;
  std::optional<double> order_estimate;
};

/// div Theta^{ij} for every pair; the report carries the worst max and
/// weighted-L1 norms over the pairs.
struct DivergenceResidual {
  ResidualReport report;
  std::vector<ScalarField> fields;  // pair-indexed like ThetaField
};
DivergenceResidual divergence_residual(const ThetaField& th);

/// Residual of the pointwise identity grad u + Theta E u = 0 (holds for every
/// constrained map into S^n_nu, harmonic or not; pure truncation remains).
ResidualReport identity_residual(const DiscMap& m);

/// Noether current of the (i,j) rotation: J = u^T E (E_ij E) grad u.
/// Verifies J = eps_ii eps_jj Theta^{ij} nodewise (exact algebra, 1e-13)
/// and throws on violation.
VectorField noether_current(const DiscMap& m, int i, int j);

/// Max-abs defect of the proportionality J = eps_ii eps_jj Theta^{ij}.
double noether_defect(const DiscMap& m, int i, int j);

struct MorreyRatio {
  double ratio = 0;
  bool degenerate = false;
  double theta_norm = 0;   // |Theta|_{M^p_p(B_1/2)}
  double grad_sq_norm = 0; // |grad u|^2_{M^p_p(B)}
};
/// Empirical constant in |Theta|_{M^p_p(B_1/2)} <= C |grad u|^2_{M^p_p(B)};
/// requires 1 < p < 2.
MorreyRatio morrey_estimate_ratio(const DiscMap& m, double p);

/// div of the conserved current beta(u)(grad t + omega_i(u) grad u^i).
ResidualReport stationary_current_residual(const ScalarField& t,
                                           const std::vector<Eigen::ArrayXd>& u,
                                           const StationaryTarget& target);

/// Definitional test for generalized harmonic maps: all div Theta^{ij}
/// residual norms below tol (default 10 h).
std::pair<bool, ResidualReport> generalized_harmonic_check(const DiscMap& m, double tol);

}  // namespace pmap
