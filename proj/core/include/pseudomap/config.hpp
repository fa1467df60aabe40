#pragma once

#include <map>
#include <string>
#include <vector>

#include "pseudomap/errors.hpp"

namespace pmap {

/// Sectioned key/value configuration:
///   [section]
///   key = value     # comment
/// Numeric values accept plain doubles and fractions like 1/256.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has_section(const std::string& s) const;
  bool has(const std::string& s, const std::string& key) const;

  std::string get_str(const std::string& s, const std::string& key,
                      const std::string& fallback) const;
  double get_double(const std::string& s, const std::string& key, double fallback) const;
  int get_int(const std::string& s, const std::string& key, int fallback) const;
  bool get_bool(const std::string& s, const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& s, const std::string& key,
                                  const std::vector<double>& fallback) const;
  std::vector<std::string> get_strs(const std::string& s, const std::string& key,
                                    const std::vector<std::string>& fallback) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

  /// "1/256" or "0.0078125" -> double.
  static double parse_number(const std::string& text);

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace pmap
