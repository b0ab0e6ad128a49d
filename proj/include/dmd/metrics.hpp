#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "dmd/dynamics.hpp"
#include "dmd/engine.hpp"
#include "dmd/geometry.hpp"
#include "dmd/objectives.hpp"

namespace dmd {

struct RegretReport {
  double dynamic_regret = 0.0;
  std::optional<double> static_regret;
  double path_variation = 0.0;      // C_T in the geometry norm
  std::vector<double> per_step;     // (1/n) sum_i f_t(x_{i,t}) - f_t(x*_t), t = 1..T
  std::vector<double> cumulative;   // running sum of per_step
  std::vector<double> normalized;   // cumulative / t
};

// Reg^d_T against the comparator path x*_1..x*_T (global losses f_t = mean of local losses).
RegretReport dynamic_regret(const RunTrace& trace, const LossEnsemble& losses, const MinimizerPath& path,
                            const MirrorGeometry& geom, const LinearDynamics& dyn);

// (1/n) sum_t sum_i (f_{i,t}(x_{i,t}) - f_{i,t}(x*_t)): each agent's own loss at its own iterate.
double local_regret(const RunTrace& trace, const LossEnsemble& losses, const MinimizerPath& path);

// argmin over the domain of sum_{t<=T} f_t, in closed form for every loss kind.
Vec static_comparator(const LossEnsemble& losses, const Domain& domain, int horizon);
double static_regret(const RunTrace& trace, const LossEnsemble& losses, const Domain& domain);

// Per-step comparator x*_t = argmin f_t for t = 1..T+1.
MinimizerPath minimizer_path(const LossEnsemble& losses, const LinearDynamics& dyn, int horizon);

// max_i ||x_{i,t} - x_bar_t|| in the geometry norm, t = 1..T+1.
std::vector<double> network_disagreement(const RunTrace& trace, const MirrorGeometry& geom);

// Entry t (t = 0..T) is L sqrt(n) sum_{tau=0}^{t} eta_tau sigma2^{t-tau} and bounds the
// disagreement at time t+1. etas holds eta_1..eta_{T+1}; eta_0 is taken to be eta_1, and 0^0 = 1.
std::vector<double> lemma1_bound(double lipschitz, int n, double sigma2, const std::vector<double>& etas);

struct BoundInputs {
  GeometryConstants constants;
  double lipschitz = 0.0;             // L
  std::optional<double> gradient_bound;  // G; defaults to L
  double sigma2 = 0.0;
  std::vector<double> etas;           // eta_1..eta_{T+1}
  std::vector<double> noise_norms;    // ||v_t||, t = 1..T
  int agents = 1;
  int horizon = 0;
};

struct BoundReport {
  double e_track = 0.0;
  double e_net = 0.0;
  double theorem1_total = 0.0;
  double theorem2_e_track = 0.0;
  double theorem2_e_net = 0.0;
  double theorem2_total = 0.0;
  double lemma2_rhs = 0.0;
  double lemma4_rhs = 0.0;
  std::vector<double> lemma1_curve;
  double path_variation = 0.0;
  BoundInputs inputs;
};

// Exact finite sums; no geometric-series relaxation.
BoundReport theorem1_bound(const BoundInputs& in);

struct CorollaryBound {
  double value = 0.0;
  double eta = 0.0;
  bool used_fallback = false;
};

// Theorem 1 evaluated at the constant step eta = sqrt((1 - sigma2) C_T / T). With C_T = 0 the
// fallback step is used and reported; without one, std::invalid_argument.
CorollaryBound corollary1_bound(const GeometryConstants& constants, double lipschitz, double sigma2, double path_variation,
                                int agents, int horizon, std::optional<double> fallback_eta = std::nullopt);

void write_regret_csv(std::ostream& out, const RegretReport& r);
void write_bounds_csv(std::ostream& out, const BoundReport& b);

}  // namespace dmd
