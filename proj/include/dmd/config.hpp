#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmd/common.hpp"

namespace dmd {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class Scenario { tracking, synthetic_bounds, custom };

// Fully resolved experiment settings. Every field has a default; the tracking defaults are the
// sensor-network experiment (5x5 grid, eps = 0.1, sigma_v2 = 0.5, eta = 0.5, T = 1000, 50 runs).
struct ExperimentConfig {
  Scenario scenario = Scenario::tracking;
  int horizon = 1000;
  int runs = 50;
  std::string gradient = "stochastic";  // exact | stochastic
  std::string convention = "literal";   // literal | exact
  std::string exec = "serial";          // serial | parallel

  std::string graph = "grid";  // grid | complete | random
  int rows = 5, cols = 5;
  int nodes = 25;
  double edge_prob = 0.5;
  std::string weights = "metropolis";  // metropolis | uniform

  std::string mirror = "euclidean";  // euclidean | kl
  double box = 10000.0;               // half-width B of the box [-B, B]^d
  int dim = 4;
  double floor = 0.01;

  std::string schedule = "constant";  // constant | inv_sqrt | corollary_optimal
  double eta = 0.5;

  std::string dynamics = "ncv";  // ncv | identity
  double eps = 0.1;
  double scale = 1.0;

  std::string noise = "gaussian_ncv";  // gaussian_ncv | zero | constant_drift | file
  double sigma_v2 = 0.5;
  bool fixed_path = false;
  std::vector<double> drift;
  std::string noise_file;

  std::vector<double> target_x0 = {0.0, 1.0, 0.0, 1.0};
  double halfwidth = 1.0;

  std::string loss = "quadratic";  // quadratic | linear
  double gradient_noise = 0.0;
  double synthetic_drift = 0.05;
  double spread = 1.0;
  double offset = 0.1;  // custom scenario: spread of the per-agent centers around the path

  // canonical key=value form of every setting (after defaults and overrides)
  std::map<std::string, std::string> values;
  std::string hash;  // 16 hex digits, FNV-1a over `values`
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Reads variables through std::getenv.
EnvLookup process_env();

// INI-style document: "[section]" headers, "key = value" lines, '#' or ';' comments. Keys are
// addressed as section.key. Any key may be overridden by DMD_<SECTION>_<KEY> in `env`.
ExperimentConfig parse_config(const std::string& text, const EnvLookup& env = {});

// Re-resolve with one key replaced (used by sweeps). Throws ConfigError for unknown keys or
// non-numeric values when `numeric` is set.
ExperimentConfig with_value(const ExperimentConfig& base, const std::string& key, const std::string& value, bool numeric = true);

// FNV-1a 64 over the sorted "key=value\n" lines, as 16 hex digits.
std::string hash_values(const std::map<std::string, std::string>& values);

std::vector<std::string> known_keys();
std::string env_name(const std::string& key);

}  // namespace dmd
