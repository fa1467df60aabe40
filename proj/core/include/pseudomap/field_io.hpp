#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pseudomap/grid.hpp"

namespace pmap {

/// Writes node-indexed components as CSV with header `x,y,<name>,...`.
/// Doubles are printed with %.17g so identical runs produce identical bytes.
void write_field_csv(const std::string& path, const GridPtr& grid,
                     const std::vector<std::pair<std::string, const Eigen::ArrayXd*>>& comps);

/// Grid metadata sidecar: {"h": ..., "mask": "unit_disc", ...}.
void write_grid_meta_json(const std::string& path, const DiscGrid& grid);

/// Reads a CSV written by write_field_csv (or hand-made boundary tables):
/// each row is matched to the nearest grid node. Returns one array per
/// component column.
std::vector<Eigen::ArrayXd> read_field_csv(const std::string& path, const GridPtr& grid);

/// printf("%.17g") into a std::string; the one float formatter used by all
/// deterministic text output.
std::string format_double(double v);

}  // namespace pmap
