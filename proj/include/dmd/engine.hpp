#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmd/common.hpp"
#include "dmd/dynamics.hpp"
#include "dmd/geometry.hpp"
#include "dmd/network.hpp"
#include "dmd/objectives.hpp"

namespace dmd {

enum class ScheduleKind { constant, inv_sqrt, corollary_optimal };

// Positive, non-increasing step sizes eta_1..eta_{T+1}.
struct StepSchedule {
  ScheduleKind kind = ScheduleKind::constant;
  double eta0 = 0.5;
  int horizon = 0;  // T; valid times are 1..T+1
  // corollary_optimal only
  double path_variation = 0.0;
  double sigma2 = 0.0;

  static StepSchedule constant(double eta, int horizon);
  static StepSchedule inv_sqrt(double eta0, int horizon);
  // eta = sqrt((1 - sigma2) C_T / T); eta0 is the fallback used when C_T = 0.
  static StepSchedule corollary_optimal(double path_variation, double sigma2, int horizon, double fallback_eta);

  bool uses_fallback() const { return kind == ScheduleKind::corollary_optimal && path_variation == 0.0; }
};

double schedule_eta(const StepSchedule& s, int t);

// Row i holds agent i. x: iterates x_{i,t}; y: mixed states y_{i,t}; xhat: prox outputs x^_{i,t+1}.
struct AgentStates {
  Mat x, y, xhat;
};

class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, int step) : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

// All agents start at x0, or at the origin (euclidean) / uniform distribution (KL).
AgentStates init_state(int n, const MirrorGeometry& geom, const std::optional<Vec>& x0 = std::nullopt);

// One synchronous round. `grads` row i must be evaluated at states.x row i.
//   y_i    = sum_j W_ij x_j
//   xhat_i = prox(g_i, y_i, eta)
//   x_i'   = A xhat_i   (re-projected for KL domains)
AgentStates step(const AgentStates& states, const WeightMatrix& w, const MirrorGeometry& geom, const LinearDynamics& dyn,
                 const Mat& grads, double eta, Exec exec = Exec::serial, int step_index = 0);

enum class GradientMode { exact, stochastic };

struct RunSpec {
  WeightMatrix weights;
  MirrorGeometry geometry;
  LinearDynamics dynamics;
  StepSchedule schedule;
  GradientMode mode = GradientMode::exact;
  int horizon = 0;
  std::uint64_t seed = 0;
  std::optional<Vec> x0;
  Exec exec = Exec::serial;
  std::string config_hash;
};

struct RunTrace {
  int agents = 0, dim = 0, horizon = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<Mat> iterates;   // x_t for t = 1..T+1
  std::vector<Mat> mixed;      // y_t for t = 1..T
  std::vector<Mat> prox;       // xhat_{t+1} for t = 1..T
  std::vector<Mat> gradients;  // gradients used at t = 1..T
  std::vector<double> etas;    // eta_1..eta_{T+1}
  std::vector<Vec> means;      // x_bar_t for t = 1..T+1

  const Mat& x(int t) const { return iterates.at(static_cast<std::size_t>(t - 1)); }
};

// Stochastic mode queries each agent's oracle exactly once per step from a per-agent stream
// derived from spec.seed, so traces are reproducible bit for bit.
RunTrace run(const RunSpec& spec, const LossEnsemble& losses);

}  // namespace dmd
