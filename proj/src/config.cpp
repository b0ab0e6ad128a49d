#include "dmd/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <fmt/format.h>

#include "dmd/csv.hpp"

namespace dmd {

namespace {

using Values = std::map<std::string, std::string>;

const Values& base_defaults() {
  static const Values v = {
      {"experiment.scenario", "tracking"},
      {"experiment.horizon", "1000"},
      {"experiment.runs", "50"},
      {"experiment.gradient", "stochastic"},
      {"experiment.convention", "literal"},
      {"experiment.exec", "serial"},
      {"network.graph", "grid"},
      {"network.rows", "5"},
      {"network.cols", "5"},
      {"network.nodes", "25"},
      {"network.edge_prob", "0.5"},
      {"network.weights", "metropolis"},
      {"geometry.mirror", "euclidean"},
      {"geometry.box", "10000"},
      {"geometry.dim", "4"},
      {"geometry.floor", "0.01"},
      {"schedule.kind", "constant"},
      {"schedule.eta", "0.5"},
      {"dynamics.model", "ncv"},
      {"dynamics.eps", "0.1"},
      {"dynamics.scale", "1"},
      {"noise.model", "gaussian_ncv"},
      {"noise.sigma_v2", "0.5"},
      {"noise.fixed_path", "false"},
      {"noise.drift", ""},
      {"noise.file", ""},
      {"target.x0", "0,1,0,1"},
      {"observation.halfwidth", "1"},
      {"synthetic.loss", "quadratic"},
      {"synthetic.gradient_noise", "0"},
      {"synthetic.drift", "0.05"},
      {"synthetic.spread", "1"},
      {"synthetic.offset", "0.1"},
  };
  return v;
}

// Scenario-specific defaults layered over the tracking ones.
Values scenario_defaults(const std::string& scenario) {
  Values v = base_defaults();
  if (scenario == "synthetic_bounds") {
    v["experiment.horizon"] = "300";
    v["experiment.runs"] = "20";
    v["experiment.gradient"] = "exact";
    v["network.graph"] = "random";
    v["network.nodes"] = "9";
    v["geometry.box"] = "1";
    v["geometry.dim"] = "3";
    v["schedule.eta"] = "0.1";
    v["dynamics.model"] = "identity";
    v["noise.model"] = "zero";
    v["target.x0"] = "";
  } else if (scenario == "custom") {
    v["experiment.gradient"] = "exact";
    v["network.rows"] = "3";
    v["network.cols"] = "3";
    v["geometry.box"] = "10";
    v["geometry.dim"] = "2";
    v["dynamics.model"] = "identity";
    v["noise.model"] = "constant_drift";
    v["noise.drift"] = "0.001,0.001";
    v["target.x0"] = "1,1";
  }
  return v;
}

std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double to_double(const std::string& key, const std::string& s) {
  try {
    const double v = csv::parse_number(s);
    if (!std::isfinite(v)) throw std::invalid_argument("not finite");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + s + "'");
  }
}

int to_int(const std::string& key, const std::string& s) {
  const double v = to_double(key, s);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key, "expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& s) {
  const std::string l = lower(s);
  if (l == "true" || l == "1" || l == "yes") return true;
  if (l == "false" || l == "0" || l == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + s + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& cell : csv::split(s)) out.push_back(to_double(key, trim(cell)));
  return out;
}

std::string one_of(const std::string& key, const std::string& s, std::initializer_list<const char*> options) {
  for (const char* o : options)
    if (s == o) return s;
  std::string list;
  for (const char* o : options) list += (list.empty() ? "" : ", ") + std::string(o);
  throw ConfigError(key, "expected one of {" + list + "}, got '" + s + "'");
}

}  // namespace

std::string hash_values(const std::map<std::string, std::string>& values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [k, v] : values) feed(k + "=" + v + "\n");
  return fmt::format("{:016x}", h);
}

namespace {

ExperimentConfig build(Values values) {
  ExperimentConfig c;
  auto get = [&](const char* k) -> const std::string& { return values.at(k); };

  c.scenario = [&] {
    const std::string s = one_of("experiment.scenario", get("experiment.scenario"), {"tracking", "synthetic_bounds", "custom"});
    return s == "tracking" ? Scenario::tracking : s == "custom" ? Scenario::custom : Scenario::synthetic_bounds;
  }();
  c.horizon = to_int("experiment.horizon", get("experiment.horizon"));
  if (c.horizon < 1) throw ConfigError("experiment.horizon", "must be >= 1");
  c.runs = to_int("experiment.runs", get("experiment.runs"));
  if (c.runs < 1) throw ConfigError("experiment.runs", "must be >= 1");
  c.gradient = one_of("experiment.gradient", get("experiment.gradient"), {"exact", "stochastic"});
  c.convention = one_of("experiment.convention", get("experiment.convention"), {"literal", "exact"});
  c.exec = one_of("experiment.exec", get("experiment.exec"), {"serial", "parallel"});

  c.graph = one_of("network.graph", get("network.graph"), {"grid", "complete", "random"});
  c.rows = to_int("network.rows", get("network.rows"));
  c.cols = to_int("network.cols", get("network.cols"));
  c.nodes = to_int("network.nodes", get("network.nodes"));
  c.edge_prob = to_double("network.edge_prob", get("network.edge_prob"));
  c.weights = one_of("network.weights", get("network.weights"), {"metropolis", "uniform"});
  if (c.graph == "grid" && (c.rows < 1 || c.cols < 1 || c.rows * c.cols < 2)) throw ConfigError("network.rows", "grid needs at least 2 nodes");
  if (c.graph != "grid" && c.nodes < 1) throw ConfigError("network.nodes", "must be >= 1");
  if (!(c.edge_prob > 0.0) || c.edge_prob > 1.0) throw ConfigError("network.edge_prob", "must lie in (0, 1]");
  if (c.weights == "uniform" && c.graph != "complete") throw ConfigError("network.weights", "uniform weights need the complete graph");

  c.mirror = one_of("geometry.mirror", get("geometry.mirror"), {"euclidean", "kl"});
  c.box = to_double("geometry.box", get("geometry.box"));
  if (!(c.box > 0.0)) throw ConfigError("geometry.box", "must be positive");
  c.dim = to_int("geometry.dim", get("geometry.dim"));
  if (c.dim < 1) throw ConfigError("geometry.dim", "must be >= 1");
  c.floor = to_double("geometry.floor", get("geometry.floor"));
  if (c.mirror == "kl") {
    if (c.dim < 2) throw ConfigError("geometry.dim", "the simplex needs dim >= 2");
    if (!(c.floor > 0.0) || !(c.floor < 1.0 / c.dim)) throw ConfigError("geometry.floor", "must lie in (0, 1/dim)");
  }

  c.schedule = one_of("schedule.kind", get("schedule.kind"), {"constant", "inv_sqrt", "corollary_optimal"});
  c.eta = to_double("schedule.eta", get("schedule.eta"));
  if (!(c.eta > 0.0)) throw ConfigError("schedule.eta", "must be positive");

  c.dynamics = one_of("dynamics.model", get("dynamics.model"), {"ncv", "identity"});
  c.eps = to_double("dynamics.eps", get("dynamics.eps"));
  if (!(c.eps > 0.0)) throw ConfigError("dynamics.eps", "must be positive");
  c.scale = to_double("dynamics.scale", get("dynamics.scale"));
  if (std::abs(c.scale) > 1.0) throw ConfigError("dynamics.scale", "must lie in [-1, 1] for non-expansive dynamics");

  c.noise = one_of("noise.model", get("noise.model"), {"gaussian_ncv", "zero", "constant_drift", "file"});
  c.sigma_v2 = to_double("noise.sigma_v2", get("noise.sigma_v2"));
  if (c.sigma_v2 < 0.0) throw ConfigError("noise.sigma_v2", "must be non-negative");
  c.fixed_path = to_bool("noise.fixed_path", get("noise.fixed_path"));
  c.drift = to_list("noise.drift", get("noise.drift"));
  c.noise_file = get("noise.file");
  if (c.noise == "file" && c.noise_file.empty()) throw ConfigError("noise.file", "required when noise.model = file");

  c.target_x0 = to_list("target.x0", get("target.x0"));
  c.halfwidth = to_double("observation.halfwidth", get("observation.halfwidth"));
  if (c.halfwidth < 0.0) throw ConfigError("observation.halfwidth", "must be non-negative");

  c.loss = one_of("synthetic.loss", get("synthetic.loss"), {"quadratic", "linear"});
  c.gradient_noise = to_double("synthetic.gradient_noise", get("synthetic.gradient_noise"));
  if (c.gradient_noise < 0.0) throw ConfigError("synthetic.gradient_noise", "must be non-negative");
  c.synthetic_drift = to_double("synthetic.drift", get("synthetic.drift"));
  if (c.synthetic_drift < 0.0) throw ConfigError("synthetic.drift", "must be non-negative");
  c.spread = to_double("synthetic.spread", get("synthetic.spread"));
  if (c.spread < 0.0 || c.spread > 1.0) throw ConfigError("synthetic.spread", "must lie in [0, 1]");
  c.offset = to_double("synthetic.offset", get("synthetic.offset"));
  if (c.offset < 0.0) throw ConfigError("synthetic.offset", "must be non-negative");

  // cross-field checks
  if (c.scenario == Scenario::tracking) {
    if (c.mirror != "euclidean") throw ConfigError("geometry.mirror", "the tracking scenario uses the euclidean box");
    if (c.dynamics != "ncv") throw ConfigError("dynamics.model", "the tracking scenario uses the ncv model");
    if (c.target_x0.size() != 4) throw ConfigError("target.x0", "the ncv target state has 4 entries");
  }
  if (c.scenario == Scenario::custom) {
    if (c.mirror != "euclidean") throw ConfigError("geometry.mirror", "the custom scenario uses the euclidean box");
    const std::size_t d = c.dynamics == "ncv" ? 4 : static_cast<std::size_t>(c.dim);
    if (c.target_x0.size() != d) throw ConfigError("target.x0", fmt::format("expected {} entries", d));
    if (c.noise == "constant_drift" && c.drift.size() != d) throw ConfigError("noise.drift", fmt::format("expected {} entries", d));
    if (c.noise == "gaussian_ncv" && c.dynamics != "ncv") throw ConfigError("noise.model", "gaussian_ncv noise needs the ncv dynamics");
  }
  if (c.scenario == Scenario::synthetic_bounds && c.dynamics == "ncv")
    throw ConfigError("dynamics.model", "synthetic suites use identity dynamics (optionally scaled)");
  if (c.scenario == Scenario::synthetic_bounds && c.mirror == "kl" && c.scale != 1.0)
    throw ConfigError("dynamics.scale", "kl synthetic suites use A = I");

  c.hash = hash_values(values);
  c.values = std::move(values);
  return c;
}

}  // namespace

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, v] : base_defaults()) keys.push_back(k);
  return keys;
}

std::string env_name(const std::string& key) {
  std::string out = "DMD_";
  for (char c : key) out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

ExperimentConfig parse_config(const std::string& text, const EnvLookup& env) {
  Values file;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", fmt::format("line {}: malformed section header", lineno));
      section = lower(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", fmt::format("line {}: expected key = value", lineno));
    const std::string name = lower(trim(line.substr(0, eq)));
    const std::string key = section.empty() ? name : section + "." + name;
    if (!base_defaults().count(key)) throw ConfigError(key, "unknown key");
    if (file.count(key)) throw ConfigError(key, "duplicate key");
    file[key] = trim(line.substr(eq + 1));
  }
  if (env) {
    for (const auto& [key, unused] : base_defaults()) {
      (void)unused;
      if (auto v = env(env_name(key))) file[key] = trim(*v);
    }
  }
  const auto it = file.find("experiment.scenario");
  Values values = scenario_defaults(it == file.end() ? "tracking" : it->second);
  for (auto& [k, v] : file) values[k] = v;
  return build(std::move(values));
}

ExperimentConfig with_value(const ExperimentConfig& base, const std::string& key, const std::string& value, bool numeric) {
  if (!base.values.count(key)) throw ConfigError(key, "unknown key");
  if (numeric) to_double(key, value);
  Values values = base.values;
  values[key] = value;
  return build(std::move(values));
}

}  // namespace dmd
