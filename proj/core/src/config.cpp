#include "pseudomap/config.hpp"

#include <fstream>
#include <sstream>

namespace pmap {

namespace {
std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config: empty key at line " + std::to_string(lineno));
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

bool Config::has_section(const std::string& s) const { return sections_.count(s) > 0; }

bool Config::has(const std::string& s, const std::string& key) const {
  auto it = sections_.find(s);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::string Config::get_str(const std::string& s, const std::string& key,
                            const std::string& fallback) const {
  auto it = sections_.find(s);
  if (it == sections_.end()) return fallback;
  auto kit = it->second.find(key);
  return kit == it->second.end() ? fallback : kit->second;
}

double Config::parse_number(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const double num = std::stod(text.substr(0, slash));
      const double den = std::stod(text.substr(slash + 1));
      if (den == 0) throw ConfigError("config: division by zero in " + text);
      return num / den;
    }
    return std::stod(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError("config: cannot parse number " + text);
  } catch (const std::out_of_range&) {
    throw ConfigError("config: number out of range " + text);
  }
}

double Config::get_double(const std::string& s, const std::string& key, double fallback) const {
  if (!has(s, key)) return fallback;
  return parse_number(get_str(s, key, ""));
}

int Config::get_int(const std::string& s, const std::string& key, int fallback) const {
  if (!has(s, key)) return fallback;
  return static_cast<int>(parse_number(get_str(s, key, "")));
}

bool Config::get_bool(const std::string& s, const std::string& key, bool fallback) const {
  if (!has(s, key)) return fallback;
  const std::string v = get_str(s, key, "");
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: cannot parse boolean " + v);
}

std::vector<double> Config::get_doubles(const std::string& s, const std::string& key,
                                        const std::vector<double>& fallback) const {
  if (!has(s, key)) return fallback;
  std::vector<double> out;
  std::stringstream ss(get_str(s, key, ""));
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (!cell.empty()) out.push_back(parse_number(cell));
  }
  return out;
}

std::vector<std::string> Config::get_strs(const std::string& s, const std::string& key,
                                          const std::vector<std::string>& fallback) const {
  if (!has(s, key)) return fallback;
  std::vector<std::string> out;
  std::stringstream ss(get_str(s, key, ""));
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (!cell.empty()) out.push_back(cell);
  }
  return out;
}

}  // namespace pmap
