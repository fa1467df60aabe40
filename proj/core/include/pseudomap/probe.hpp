#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pseudomap/maps.hpp"
#include "pseudomap/norms.hpp"

namespace pmap {

struct ProbeRow {
  double amplitude = 0;
  double morrey = 0;        // |grad u|_{M^p_p(B)}
  double holder_alpha = 0;  // NaN when degenerate
  double el_residual = 0;
  std::string status;       // ok | degenerate_constant | NonConvergence
};

/// Sweeps boundary-data amplitudes, solves each problem and tabulates the
/// Morrey norm of the gradient, the Holder-exponent probe and the final EL
/// residual. Rows for non-convergent solves are retained with their status.
/// The tabulated transition is empirical; it does not estimate the
/// epsilon-regularity threshold constant.
std::vector<ProbeRow> epsilon_probe(
    const std::function<BoundaryClosure(double)>& family, const std::vector<double>& amplitudes,
    const QuadricSpec& q, const SolverConfig& cfg, GridPtr grid, double p);

/// CSV emission with header s,morrey_p,holder_alpha,el_residual,status.
void write_probe_csv(const std::string& path, const std::vector<ProbeRow>& rows);

}  // namespace pmap
