#include "pseudomap/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "pseudomap/field_io.hpp"
#include "pseudomap/norms.hpp"

namespace pmap {

CheckResult CheckResult::leq(const std::string& name, double value, double tol) {
  return CheckResult{name, value, tol, value <= tol};
}

CheckResult CheckResult::geq(const std::string& name, double value, double bound) {
  return CheckResult{name, value, bound, value >= bound};
}

CheckResult CheckResult::info(const std::string& name, double value) {
  return CheckResult{name, value, std::numeric_limits<double>::infinity(), true};
}

bool ExperimentReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void write_report_json(const std::string& path, const std::vector<ExperimentReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& rep : reports) {
    nlohmann::ordered_json j;
    j["experiment"] = rep.experiment;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : rep.checks) {
      nlohmann::ordered_json cj;
      cj["name"] = c.name;
      cj["value"] = c.value;
      cj["tol"] = c.tol;
      cj["pass"] = c.pass;
      j["checks"].push_back(cj);
    }
    arr.push_back(j);
  }
  std::ofstream out(path);
  if (!out) throw IoError("write_report_json: cannot open " + path);
  out << arr.dump(2) << "\n";
  if (!out) throw IoError("write_report_json: write failed for " + path);
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows,
               const std::vector<std::string>& row_suffixes) {
  std::ofstream out(path);
  if (!out) throw IoError("write_csv: cannot open " + path);
  out << header << "\n";
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) {
      if (c) out << ",";
      out << format_double(rows[r][c]);
    }
    if (!row_suffixes.empty()) out << "," << row_suffixes[r];
    out << "\n";
  }
  if (!out) throw IoError("write_csv: write failed for " + path);
}

ResidualReport with_order(ResidualReport fine, const ResidualReport& coarse) {
  fine.order_estimate = observed_order(coarse.norm_max, fine.norm_max);
  return fine;
}

std::string residual_report_json(const ResidualReport& rep) {
  nlohmann::ordered_json j;
  j["law"] = rep.law;
  j["norm_max"] = rep.norm_max;
  j["norm_l1"] = rep.norm_l1;
  j["h"] = rep.h;
  if (rep.order_estimate)
    j["order_estimate"] = *rep.order_estimate;
  else
    j["order_estimate"] = nullptr;
  return j.dump();
}

}  // namespace pmap
