#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "clustering.hpp"
#include "correlation.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "factor.hpp"
#include "forest.hpp"
#include "tree.hpp"

namespace likert {

struct StageToggles {
  bool reliability = true;
  bool summaries = true;
  bool associations = true;
  bool correlation = true;
  bool clustering = true;
  bool factor = true;
  bool tree = true;
  bool forest = true;

  bool any() const { return reliability || summaries || associations || correlation || clustering || factor || tree || forest; }
};

struct RunConfig {
  std::string input;
  std::string out = "likert-miner-out";
  std::uint64_t seed = 20131;
  std::string response = "Opinion";  // Opinion or an item name
  std::vector<std::string> format{"json", "text"};
  std::vector<std::string> plots{"all"};
  Schema schema;
  StageToggles stages;

  std::vector<std::pair<std::string, std::string>> association_pairs{
      {"instr", "variation"}, {"class", "variation"}, {"attendance", "variation"},
      {"difficulty", "variation"}, {"attendance", "difficulty"}};
  bool summaries_by_instructor = true;

  CorrelationMethod correlation_method = CorrelationMethod::KendallTauB;
  bool correlation_compare = true;

  std::size_t cluster_k = 3;
  KMeansOptions kmeans;
  std::size_t cluster_curve_max_k = 6;

  std::size_t factor_q = 2;
  FactorOptions factor;
  bool factor_scores = true;

  TreeParams tree;
  ForestParams forest;
  bool response_include_metadata = false;  // add attendance/difficulty/nb.repeat as predictors of an item
};

namespace detail {

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(ErrorKind::ConfigError, key + ": expected a boolean, got '" + v + "'");
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    if (!v.empty() && v.front() != '-') out = std::stoull(v, &used);
  } catch (...) {
    used = 0;
  }
  if (used == 0 || used != v.size()) fail(ErrorKind::ConfigError, key + ": expected a nonnegative integer, got '" + v + "'");
  return out;
}

inline double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (...) {
    used = 0;
  }
  if (used == 0 || used != v.size()) fail(ErrorKind::ConfigError, key + ": expected a number, got '" + v + "'");
  return out;
}

inline std::vector<std::string> parse_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream in(v);
  std::string part;
  while (std::getline(in, part, ',')) {
    const auto t = trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

inline std::string bool_text(bool b) { return b ? "true" : "false"; }

template <typename T>
std::string number_text(T v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

struct ConfigKey {
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define LIKERT_BOOL_KEY(key, field)                                                              \
  ConfigKey {                                                                                    \
    key, [](RunConfig& c, const std::string& v) { c.field = parse_bool(key, v); },               \
        [](const RunConfig& c) { return bool_text(c.field); }                                    \
  }
#define LIKERT_SIZE_KEY(key, field)                                                                            \
  ConfigKey {                                                                                                  \
    key, [](RunConfig& c, const std::string& v) { c.field = static_cast<decltype(c.field)>(parse_unsigned(key, v)); }, \
        [](const RunConfig& c) { return number_text(c.field); }                                                \
  }
#define LIKERT_REAL_KEY(key, field)                                                              \
  ConfigKey {                                                                                    \
    key, [](RunConfig& c, const std::string& v) { c.field = parse_real(key, v); },               \
        [](const RunConfig& c) { return number_text(c.field); }                                  \
  }
#define LIKERT_STRING_KEY(key, field)                                                            \
  ConfigKey {                                                                                    \
    key, [](RunConfig& c, const std::string& v) { c.field = v; },                                \
        [](const RunConfig& c) { return c.field; }                                               \
  }

inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys{
      LIKERT_STRING_KEY("input", input),
      LIKERT_STRING_KEY("out", out),
      LIKERT_SIZE_KEY("seed", seed),
      LIKERT_STRING_KEY("response", response),
      ConfigKey{"format",
                [](RunConfig& c, const std::string& v) {
                  c.format = parse_list(v);
                  for (const auto& f : c.format)
                    if (f != "text" && f != "json" && f != "csv")
                      fail(ErrorKind::ConfigError, "format: unknown output format '" + f + "'");
                },
                [](const RunConfig& c) { return join(c.format); }},
      ConfigKey{"plots", [](RunConfig& c, const std::string& v) { c.plots = parse_list(v); },
                [](const RunConfig& c) { return join(c.plots); }},

      LIKERT_STRING_KEY("schema.instr", schema.instructor),
      LIKERT_STRING_KEY("schema.class", schema.course),
      LIKERT_STRING_KEY("schema.nb.repeat", schema.repetitions),
      LIKERT_STRING_KEY("schema.attendance", schema.attendance),
      LIKERT_STRING_KEY("schema.difficulty", schema.difficulty),
      LIKERT_STRING_KEY("schema.item_prefix", schema.item_prefix),

      LIKERT_BOOL_KEY("stages.reliability", stages.reliability),
      LIKERT_BOOL_KEY("stages.summaries", stages.summaries),
      LIKERT_BOOL_KEY("stages.associations", stages.associations),
      LIKERT_BOOL_KEY("stages.correlation", stages.correlation),
      LIKERT_BOOL_KEY("stages.clustering", stages.clustering),
      LIKERT_BOOL_KEY("stages.factor", stages.factor),
      LIKERT_BOOL_KEY("stages.tree", stages.tree),
      LIKERT_BOOL_KEY("stages.forest", stages.forest),

      LIKERT_BOOL_KEY("summaries.by_instructor", summaries_by_instructor),
      ConfigKey{"associations.pairs",
                [](RunConfig& c, const std::string& v) {
                  c.association_pairs.clear();
                  for (const auto& pair : parse_list(v)) {
                    const auto colon = pair.find(':');
                    if (colon == std::string::npos || colon == 0 || colon + 1 == pair.size())
                      fail(ErrorKind::ConfigError, "associations.pairs: expected row:col, got '" + pair + "'");
                    c.association_pairs.emplace_back(pair.substr(0, colon), pair.substr(colon + 1));
                  }
                },
                [](const RunConfig& c) {
                  std::vector<std::string> parts;
                  for (const auto& [r, col] : c.association_pairs) parts.push_back(r + ":" + col);
                  return join(parts);
                }},

      ConfigKey{"correlation.method",
                [](RunConfig& c, const std::string& v) {
                  if (v == "kendall" || v == "tau-b" || v == "kendall_tau_b")
                    c.correlation_method = CorrelationMethod::KendallTauB;
                  else if (v == "pearson")
                    c.correlation_method = CorrelationMethod::Pearson;
                  else
                    fail(ErrorKind::ConfigError, "correlation.method: expected kendall or pearson, got '" + v + "'");
                },
                [](const RunConfig& c) {
                  return std::string(c.correlation_method == CorrelationMethod::Pearson ? "pearson" : "kendall");
                }},
      LIKERT_BOOL_KEY("correlation.compare", correlation_compare),

      LIKERT_SIZE_KEY("cluster.k", cluster_k),
      LIKERT_SIZE_KEY("cluster.restarts", kmeans.restarts),
      LIKERT_SIZE_KEY("cluster.max_iterations", kmeans.max_iterations),
      LIKERT_SIZE_KEY("cluster.curve_max_k", cluster_curve_max_k),

      LIKERT_SIZE_KEY("factor.q", factor_q),
      LIKERT_REAL_KEY("factor.tolerance", factor.tolerance),
      LIKERT_SIZE_KEY("factor.max_iterations", factor.max_iterations),
      LIKERT_BOOL_KEY("factor.rotate", factor.rotate),
      LIKERT_BOOL_KEY("factor.scores", factor_scores),

      LIKERT_SIZE_KEY("tree.min_split", tree.min_split),
      LIKERT_SIZE_KEY("tree.min_leaf", tree.min_leaf),
      LIKERT_SIZE_KEY("tree.max_depth", tree.max_depth),
      LIKERT_REAL_KEY("tree.cp", tree.cp),

      LIKERT_SIZE_KEY("forest.trees", forest.trees),
      LIKERT_SIZE_KEY("forest.features_per_tree", forest.features_per_tree),
      LIKERT_SIZE_KEY("forest.min_split", forest.tree.min_split),
      LIKERT_SIZE_KEY("forest.min_leaf", forest.tree.min_leaf),
      LIKERT_SIZE_KEY("forest.max_depth", forest.tree.max_depth),
      LIKERT_REAL_KEY("forest.cp", forest.tree.cp),

      LIKERT_BOOL_KEY("response.include_metadata", response_include_metadata),
  };
  return keys;
}

#undef LIKERT_BOOL_KEY
#undef LIKERT_SIZE_KEY
#undef LIKERT_REAL_KEY
#undef LIKERT_STRING_KEY

}  // namespace detail

inline bool is_config_key(const std::string& key) {
  const auto& keys = detail::config_keys();
  return std::any_of(keys.begin(), keys.end(), [&](const auto& k) { return key == k.name; });
}

inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& k : detail::config_keys())
    if (key == k.name) {
      k.set(cfg, value);
      return;
    }
  detail::fail(ErrorKind::ConfigError, "unknown configuration key '" + key + "'");
}

/// Every key with its current value, in declaration order.
inline std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : detail::config_keys()) out.emplace_back(k.name, k.get(cfg));
  return out;
}

/// Reads `key = value` lines; `#` starts a comment, blank lines are ignored.
inline void read_config(std::istream& in, RunConfig& cfg, const std::string& origin = "config") {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      detail::fail(ErrorKind::ConfigError, origin + ":" + std::to_string(number) + ": expected key=value");
    const std::string key(detail::trim(body.substr(0, eq)));
    const std::string value(detail::trim(body.substr(eq + 1)));
    try {
      apply_setting(cfg, key, value);
    } catch (const Error& e) {
      detail::fail(ErrorKind::ConfigError, origin + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

inline RunConfig load_config(const std::string& path, RunConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) detail::fail(ErrorKind::IoError, "cannot open config file " + path);
  read_config(in, cfg, path);
  return cfg;
}

/// Checks that do not need the data.
inline void validate_config(const RunConfig& cfg) {
  detail::require(!cfg.input.empty(), ErrorKind::ConfigError, "no input file given (input= or --input)");
  detail::require(!cfg.format.empty(), ErrorKind::ConfigError, "format must name at least one output format");
  detail::require(cfg.cluster_k >= 1, ErrorKind::ConfigError, "cluster.k must be at least 1");
  detail::require(cfg.kmeans.restarts >= 1, ErrorKind::ConfigError, "cluster.restarts must be at least 1");
  detail::require(cfg.factor_q >= 1, ErrorKind::ConfigError, "factor.q must be at least 1");
  detail::require(cfg.forest.trees >= 1, ErrorKind::ConfigError, "forest.trees must be at least 1");
  const bool supervised = cfg.stages.tree || cfg.stages.forest;
  detail::require(!(supervised && cfg.response == "Opinion" && !cfg.stages.clustering), ErrorKind::ConfigError,
                  "response=Opinion needs the clustering stage enabled");
  detail::require(!(supervised && cfg.response == "Opinion" && cfg.cluster_k != 3), ErrorKind::ConfigError,
                  "response=Opinion needs cluster.k=3");
  detail::require(!(cfg.stages.factor && !cfg.stages.correlation), ErrorKind::ConfigError,
                  "the factor stage needs the correlation stage enabled");
}

}  // namespace likert
