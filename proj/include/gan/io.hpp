#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gan/characteristic.hpp"
#include "gan/experiments.hpp"

namespace gan {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// CSV

inline void write_basin_csv(std::ostream& os, const BasinCurve& curve) {
  os << "d0,mean_df,stderr,n_trials\n";
  for (const auto& r : curve.rows)
    os << format_double(r.d0) << ',' << format_double(r.mean_df) << ','
       << format_double(r.stderr_df) << ',' << r.n_trials << '\n';
}

struct CapacityRow {
  double rho = 0.0, lambda = 0.0, K = 0.0, var_phi = 0.0;
  double root = 0.0, alpha_c = 0.0, e_bits = 0.0;
};

inline void write_capacity_csv(std::ostream& os, const std::vector<CapacityRow>& rows) {
  os << "rho,lambda,K,var_phi,root,alpha_c,E\n";
  for (const auto& r : rows)
    os << format_double(r.rho) << ',' << format_double(r.lambda) << ',' << format_double(r.K) << ','
       << format_double(r.var_phi) << ',' << format_double(r.root) << ','
       << format_double(r.alpha_c) << ',' << format_double(r.e_bits) << '\n';
}

inline void write_conditions_csv(std::ostream& os, const ConditionReport& r) {
  auto pf = [](bool b) { return b ? "pass" : "fail"; };
  os << "mean,second_moment,variance,cond1,cond2,cond3\n"
     << format_double(r.mean) << ',' << format_double(r.second_moment) << ','
     << format_double(r.variance) << ',' << pf(r.cond1) << ',' << pf(r.cond2) << ','
     << pf(r.cond3) << '\n';
}

// ---------------------------------------------------------------------------
// Run records (JSON sidecars)

/// {config, seed, version, duration_ms} plus optional run statistics.
inline nlohmann::ordered_json make_run_record(const nlohmann::ordered_json& config,
                                              std::uint64_t seed, double duration_ms,
                                              const nlohmann::ordered_json& stats = {}) {
  nlohmann::ordered_json rec;
  rec["config"] = config;
  rec["seed"] = seed;
  rec["version"] = kVersion;
  rec["duration_ms"] = duration_ms;
  if (!stats.is_null()) rec["stats"] = stats;
  return rec;
}

// ---------------------------------------------------------------------------
// Config files
//
// Either a flat key/value text file
//     # comment
//     n = 100
//     d0 = 0, 0.05, 0.1        (brackets optional)
//     kind = "linear:0.3,0.4"
// or a JSON object: a flat {key: value} map, or a run record whose "config"
// object (plus top-level "seed") is used.

using ConfigEntries = std::vector<std::pair<std::string, std::vector<std::string>>>;

/// Raised for configuration problems; `key` names the offending setting.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  [[nodiscard]] const std::string& key() const { return key_; }

 private:
  std::string key_;
};

namespace detail {

inline std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

inline std::string unquote(std::string s) {
  s = trim(std::move(s));
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

inline std::string json_scalar(const nlohmann::ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

inline void add_json_entries(const nlohmann::ordered_json& obj, ConfigEntries& out) {
  for (const auto& [key, value] : obj.items()) {
    if (value.is_object()) throw ConfigError(key, "nested objects are not allowed");
    if (value.is_null()) continue;
    std::vector<std::string> items;
    if (value.is_array()) {
      for (const auto& v : value) items.push_back(json_scalar(v));
    } else {
      items.push_back(json_scalar(value));
    }
    out.emplace_back(key, std::move(items));
  }
}

}  // namespace detail

inline ConfigEntries parse_config_text(const std::string& text) {
  ConfigEntries out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::ordered_json doc;
    try {
      doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    if (doc.contains("config") && doc["config"].is_object()) {
      detail::add_json_entries(doc["config"], out);
      if (doc.contains("seed")) out.emplace_back("seed", std::vector<std::string>{doc["seed"].dump()});
    } else {
      detail::add_json_entries(doc, out);
    }
    return out;
  }
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config", "line " + std::to_string(lineno) + " is not key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config", "line " + std::to_string(lineno) + " has no key");
    std::vector<std::string> items;
    if (!value.empty() && value.front() == '"') {
      items.push_back(detail::unquote(value));
    } else {
      if (!value.empty() && value.front() == '[' && value.back() == ']')
        value = value.substr(1, value.size() - 2);
      std::stringstream vs(value);
      std::string item;
      while (std::getline(vs, item, ',')) items.push_back(detail::unquote(item));
    }
    out.emplace_back(key, std::move(items));
  }
  return out;
}

inline ConfigEntries read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace gan
