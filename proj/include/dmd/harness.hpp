#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dmd/config.hpp"
#include "dmd/dynamics.hpp"
#include "dmd/engine.hpp"
#include "dmd/metrics.hpp"
#include "dmd/network.hpp"
#include "dmd/objectives.hpp"

namespace dmd {

struct Network {
  Graph graph;
  WeightMatrix weights;
  SpectralInfo spectral;
};

// Random graphs draw from `seed`; deterministic topologies ignore it.
Network build_network(const ExperimentConfig& c, std::uint64_t seed);
MirrorGeometry build_geometry(const ExperimentConfig& c);
LinearDynamics build_dynamics(const ExperimentConfig& c);

// Seed of replicate `run` under `master`. Shared across sweep values (common random numbers).
std::uint64_t run_seed(std::uint64_t master, int run);

struct Replicate {
  std::uint64_t seed = 0;
  RunTrace trace;
  MinimizerPath path;        // comparator sequence x*_1..x*_{T+1}
  RegretReport regret;
  std::vector<double> disagreement;
  std::optional<BoundReport> bounds;
  double sigma2 = 0.0;
  double gradient_bound = 0.0;  // bound used for the Lemma 1 column: L (exact) or G (stochastic)
  double eta_corollary = 0.0;
  bool eta_fallback = false;
  // tracking-style summaries
  std::vector<double> agent_tracking_error;  // mean ||x_{i,t} - x*_t|| over the final min(100, T) steps
  double position_path_length = 0.0;          // ncv targets only
  int target_exits = 0;                        // tracking: path states outside the box
  // dominance checks (slack = bound - observed; negative means violated)
  double lemma1_min_slack = 0.0;
  int lemma1_worst_t = 0;
  std::optional<double> theorem1_slack;  // exact gradients only
};

// One replicate of any scenario, using replicate seed run_seed(master, run).
Replicate run_replicate(const ExperimentConfig& c, std::uint64_t master, int run);

struct RunOutcome {
  Replicate replicate;
  bool violation = false;
  std::vector<std::string> files;
};

// `run`: one replicate (run index 0) with every CSV artifact written to `out`.
RunOutcome run_experiment(const ExperimentConfig& c, std::uint64_t master, const std::filesystem::path& out);

struct SweepResult {
  std::string param;
  std::vector<std::string> values;
  int runs = 0;
  std::vector<std::vector<double>> mean;    // per value, normalized regret curve over t
  std::vector<std::vector<double>> stddev;  // population standard deviation across runs
  std::vector<double> final_mean, final_std;
};

// Runs are distributed over OpenMP threads; each owns its state, and results are reduced in run order.
SweepResult sweep(const ExperimentConfig& c, const std::string& param, const std::vector<std::string>& values, int runs,
                  std::uint64_t master);
void write_sweep(const SweepResult& r, const ExperimentConfig& c, std::uint64_t master, const std::filesystem::path& out);

struct VerifyOptions {
  bool exact = true;
  bool stochastic = true;
  bool include_kl = true;
  int replicates = 10;          // stochastic replicates per configuration
  double lipschitz_scale = 1.0;  // < 1 understates L and G (negative control)
};

struct VerifyRow {
  std::uint64_t seed = 0;
  std::string config;
  std::string check;
  double bound = 0.0;
  double observed = 0.0;
  double slack = 0.0;
  int t_index = 0;  // worst time index for curve checks, else the horizon
  bool pass = true;
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  int violations = 0;
};

inline constexpr double kDominanceSlack = 1e-9;

VerifyReport verify_bounds(int seeds, const VerifyOptions& options = {});
void write_verify_csv(const VerifyReport& r, const std::filesystem::path& file);

// "# config_hash=... seed=..." followed by the CSV body.
std::string csv_preamble(const std::string& hash, std::uint64_t seed);

}  // namespace dmd
