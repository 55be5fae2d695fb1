#pragma once

// Plain-text experiment configuration: one `key = value` per line, `#` starts
// a comment. Unknown keys are rejected so typos do not silently fall back to
// defaults.

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ymhk/algebra.hpp"
#include "ymhk/errors.hpp"

namespace ymhk {

class ConfigError : public UsageError {
 public:
  using UsageError::UsageError;
};

struct RunConfig {
  Group group = Group::U1;
  int N = 8;
  double L = 1.0;
  int k = 1;
  std::uint64_t seed = 1;
  double alpha = 4.0;        ///< spectral decay of the initial data
  double amplitude_A = 1.0;  ///< sup norm of initial A
  double amplitude_u = 1.0;  ///< sup norm of initial u
  double t_end = 0.0;        ///< 0 means 20 * dt_max
  double dt_init = 0.0;
  double dt_max = 0.0;
  double tolerance = 1e-8;
  double monotone_tol = 1e-10;
  int monitor_every = 1;
  int snapshot_every = 0;
  std::vector<double> p_list{4.0};
  std::string out_dir;

  std::map<std::string, std::string> raw;  ///< as read, for the manifest
};

namespace detail {
inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  T out{};
  is >> out;
  if (!is || !(is >> std::ws).eof()) throw ConfigError("config key '" + key + "': cannot parse '" + v + "'");
  return out;
}
}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
  static const std::set<std::string> known = {
      "group", "N", "L", "k", "seed", "alpha", "amplitude_A", "amplitude_u", "t_end", "dt_init",
      "dt_max", "tolerance", "monotone_tol", "monitor_every", "snapshot_every", "p", "out_dir"};
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (!known.contains(key)) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    c.raw[key] = val;

    using detail::parse_number;
    if (key == "group") c.group = parse_group(val);
    else if (key == "N") c.N = parse_number<int>(key, val);
    else if (key == "L") c.L = parse_number<double>(key, val);
    else if (key == "k") c.k = parse_number<int>(key, val);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, val);
    else if (key == "alpha") c.alpha = parse_number<double>(key, val);
    else if (key == "amplitude_A") c.amplitude_A = parse_number<double>(key, val);
    else if (key == "amplitude_u") c.amplitude_u = parse_number<double>(key, val);
    else if (key == "t_end") c.t_end = parse_number<double>(key, val);
    else if (key == "dt_init") c.dt_init = parse_number<double>(key, val);
    else if (key == "dt_max") c.dt_max = parse_number<double>(key, val);
    else if (key == "tolerance") c.tolerance = parse_number<double>(key, val);
    else if (key == "monotone_tol") c.monotone_tol = parse_number<double>(key, val);
    else if (key == "monitor_every") c.monitor_every = parse_number<int>(key, val);
    else if (key == "snapshot_every") c.snapshot_every = parse_number<int>(key, val);
    else if (key == "out_dir") c.out_dir = val;
    else if (key == "p") {
      c.p_list.clear();
      std::istringstream is(val);
      std::string item;
      while (std::getline(is, item, ',')) c.p_list.push_back(parse_number<double>(key, detail::trim(item)));
    }
  }

  if (c.N < 3) throw ConfigError("N must be >= 3");
  if (!(c.L > 0)) throw ConfigError("L must be positive");
  if (c.k < 0) throw ConfigError("k must be >= 0");
  if (c.alpha < 0) throw ConfigError("alpha must be >= 0");
  if (c.t_end < 0 || c.dt_init < 0 || c.dt_max < 0) throw ConfigError("times must be nonnegative");
  if (!(c.tolerance > 0)) throw ConfigError("tolerance must be positive");
  if (c.monitor_every < 1) throw ConfigError("monitor_every must be >= 1");
  if (c.snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
  if (c.p_list.empty()) throw ConfigError("p list must not be empty");
  for (double p : c.p_list)
    if (!(p >= 1)) throw ConfigError("every p must be >= 1");
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace ymhk
