#include "pseudomap/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pmap {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field_csv(const std::string& path, const GridPtr& grid,
                     const std::vector<std::pair<std::string, const Eigen::ArrayXd*>>& comps) {
  std::ofstream out(path);
  if (!out) throw IoError("write_field_csv: cannot open " + path);
  out << "x,y";
  for (const auto& [name, arr] : comps) {
    (void)arr;
    out << "," << name;
  }
  out << "\n";
  for (int k = 0; k < grid->num_nodes(); ++k) {
    out << format_double(grid->x(k)) << "," << format_double(grid->y(k));
    for (const auto& [name, arr] : comps) {
      (void)name;
      out << "," << format_double((*arr)[k]);
    }
    out << "\n";
  }
  if (!out) throw IoError("write_field_csv: write failed for " + path);
}

void write_grid_meta_json(const std::string& path, const DiscGrid& grid) {
  nlohmann::ordered_json j;
  j["h"] = grid.h();
  j["mask"] = "unit_disc";
  j["offset"] = grid.offset();
  j["punctured"] = grid.punctured();
  j["nodes"] = grid.num_nodes();
  std::ofstream out(path);
  if (!out) throw IoError("write_grid_meta_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

std::vector<Eigen::ArrayXd> read_field_csv(const std::string& path, const GridPtr& grid) {
  std::ifstream in(path);
  if (!in) throw IoError("read_field_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("read_field_csv: empty file " + path);
  int ncols = 1;
  for (char c : line)
    if (c == ',') ++ncols;
  if (ncols < 3) throw IoError("read_field_csv: expected x,y,component columns");
  const int ncomp = ncols - 2;
  std::vector<Eigen::ArrayXd> comps(ncomp, Eigen::ArrayXd::Zero(grid->num_nodes()));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != ncols)
      throw IoError("read_field_csv: ragged row in " + path);
    const int k = grid->nearest_node(row[0], row[1]);
    for (int c = 0; c < ncomp; ++c) comps[c][k] = row[2 + c];
  }
  return comps;
}

}  // namespace pmap
