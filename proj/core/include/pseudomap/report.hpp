#pragma once

#include <string>
#include <vector>

#include "pseudomap/conservation.hpp"

namespace pmap {

struct CheckResult {
  std::string name;
  double value = 0;
  double tol = 0;
  bool pass = false;

  /// pass iff value <= tol.
  static CheckResult leq(const std::string& name, double value, double tol);
  /// pass iff value >= bound (tol column records the bound).
  static CheckResult geq(const std::string& name, double value, double bound);
  /// informational row: always passes, tol recorded as infinity.
  static CheckResult info(const std::string& name, double value);
};

struct ExperimentReport {
  std::string experiment;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

/// report.json: array of {experiment, checks:[{name, value, tol, pass}]}.
void write_report_json(const std::string& path, const std::vector<ExperimentReport>& reports);

/// CSV with an arbitrary header and %.17g rows; row_suffixes (when given)
/// append one trailing text cell per row.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows,
               const std::vector<std::string>& row_suffixes = {});

/// Copies the fine-grid report with order_estimate = log2(coarse/fine) of the
/// max norms.
ResidualReport with_order(ResidualReport fine, const ResidualReport& coarse);

/// One JSON object for a residual report ({law, norm_max, norm_l1, h,
/// order_estimate}), dumped to a string.
std::string residual_report_json(const ResidualReport& rep);

}  // namespace pmap
