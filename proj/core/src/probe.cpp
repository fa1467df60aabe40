#include "pseudomap/probe.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "pseudomap/field_io.hpp"

namespace pmap {

std::vector<ProbeRow> epsilon_probe(
    const std::function<BoundaryClosure(double)>& family, const std::vector<double>& amplitudes,
    const QuadricSpec& q, const SolverConfig& cfg, GridPtr grid, double p) {
  std::vector<ProbeRow> rows;
  const std::vector<std::pair<double, double>> centers = {
      {0.0, 0.0}, {0.35, 0.0}, {-0.35, 0.0}, {0.0, 0.35}, {0.0, -0.35}};
  const BallFamily fam = BallFamily::dyadic(grid);

  for (double s : amplitudes) {
    ProbeRow row;
    row.amplitude = s;
    try {
      auto [m, rep] = solve(family(s), q, cfg, grid);
      std::vector<const Eigen::ArrayXd*> comps;
      for (const auto& c : m.u) comps.push_back(&c);
      row.morrey = morrey_norm(gradient_magnitude(comps, grid), p, fam).value;
      row.el_residual = rep.final_el_residual;
      try {
        row.holder_alpha = holder_exponent(comps, grid, centers);
        row.status = std::isnan(row.holder_alpha) ? "degenerate_constant" : "ok";
      } catch (const Error&) {
        // coarse grids can leave fewer than 3 dyadic radii per probe center
        row.holder_alpha = std::numeric_limits<double>::quiet_NaN();
        row.status = "insufficient_radii";
      }
    } catch (const NonConvergence& e) {
      row.morrey = std::numeric_limits<double>::quiet_NaN();
      row.holder_alpha = std::numeric_limits<double>::quiet_NaN();
      row.el_residual = e.residual;
      row.status = "NonConvergence";
    } catch (const NullConeViolation&) {
      row.morrey = std::numeric_limits<double>::quiet_NaN();
      row.holder_alpha = std::numeric_limits<double>::quiet_NaN();
      row.el_residual = std::numeric_limits<double>::quiet_NaN();
      row.status = "NullConeViolation";
    }
    rows.push_back(row);
  }
  return rows;
}

void write_probe_csv(const std::string& path, const std::vector<ProbeRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("write_probe_csv: cannot open " + path);
  out << "s,morrey_p,holder_alpha,el_residual,status\n";
  for (const auto& r : rows) {
    out << format_double(r.amplitude) << "," << format_double(r.morrey) << ","
        << format_double(r.holder_alpha) << "," << format_double(r.el_residual) << ","
        << r.status << "\n";
  }
  if (!out) throw IoError("write_probe_csv: write failed for " + path);
}

}  // namespace pmap
