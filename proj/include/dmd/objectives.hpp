#pragma once

#include <vector>

#include "dmd/common.hpp"
#include "dmd/dynamics.hpp"
#include "dmd/geometry.hpp"

namespace dmd {

enum class LossKind { tracking_square, synthetic_quadratic, synthetic_linear };

// Scaling of the tracking stochastic direction. `literal` uses e_k (z - e_k^T x), which is half the
// gradient of the square loss in expectation; `exact` doubles it.
enum class GradientConvention { literal, exact };

// Agent i observes coordinate `coordinate[i]` (0-based) of the target plus U[-h, h] noise.
struct ObservationModel {
  std::vector<int> coordinate;
  double noise_halfwidth = 1.0;

  // Near-equal contiguous groups; n = 25, dim = 4 gives 7, 6, 6, 6 agents per coordinate.
  static ObservationModel grouped(int n, int dim = 4, double halfwidth = 1.0);
  double noise_variance() const { return noise_halfwidth * noise_halfwidth / 3.0; }
};

// Local losses f_{i,t} for i in [0, n), t in [1, horizon()]. Convex in x for every kind.
class LossEnsemble {
 public:
  static LossEnsemble tracking(const MinimizerPath& path, ObservationModel obs, GradientConvention convention);
  // f_{i,t}(x) = ||x - c_{i,t}||^2 with centers[t-1].row(i) = c_{i,t}.
  static LossEnsemble quadratic(std::vector<Mat> centers, double gradient_noise = 0.0);
  // f_{i,t}(x) = <g_{i,t}, x>.
  static LossEnsemble linear(std::vector<Mat> coefficients, const Domain& domain, double gradient_noise = 0.0);

  LossKind kind() const { return kind_; }
  int agents() const { return n_; }
  int dim() const { return d_; }
  int horizon() const { return static_cast<int>(slices_.size()); }
  double gradient_noise() const { return gradient_noise_; }
  GradientConvention convention() const { return convention_; }
  const ObservationModel& observation() const { return obs_; }

  double value(int i, int t, const Vec& x) const;
  Vec gradient(int i, int t, const Vec& x) const;
  // One oracle query. Tracking: draws an observation z_{i,t}. Synthetic: exact gradient plus
  // U[-s, s]^d noise. E[result] = stochastic_scale() * gradient(i, t, x).
  Vec stochastic_gradient(int i, int t, const Vec& x, Rng& rng) const;
  double stochastic_scale() const;

  // f_t(x) = (1/n) sum_i f_{i,t}(x)
  double global_value(int t, const Vec& x) const;
  // argmin over the domain of f_t
  Vec global_minimizer(int t) const;

 private:
  void check(int i, int t) const;

  LossKind kind_ = LossKind::synthetic_quadratic;
  int n_ = 0, d_ = 0;
  // tracking: target x*_t per slice; quadratic: centers; linear: coefficients
  std::vector<Mat> slices_;
  std::vector<Vec> slice_mean_;   // mean center / mean coefficient / target
  std::vector<double> spread_;    // quadratic: (1/n) sum_i ||c_i - c_bar||^2
  Vec group_weight_;              // tracking: fraction of agents per coordinate
  ObservationModel obs_;
  GradientConvention convention_ = GradientConvention::exact;
  double gradient_noise_ = 0.0;
  Domain linear_domain_ = Domain::unconstrained(1);
};

struct SyntheticOptions {
  LossKind kind = LossKind::synthetic_quadratic;
  Mat dynamics;                 // drift of the quadratic centers; empty means identity
  double drift = 0.05;          // per-step random drift, relative to the domain half-width
  double spread = 1.0;          // per-agent center spread in [0, 1]
  double gradient_noise = 0.0;  // half-width of the additive stochastic-gradient noise
  bool zero_coefficients = false;
};

// Fixtures on bounded domains where every standing assumption can be checked. Generates
// horizon + 1 time slices so the comparator path has x*_{T+1}.
LossEnsemble synthetic_suite(std::uint64_t seed, int n, int d, int horizon, const MirrorGeometry& geom,
                             const SyntheticOptions& options = {});

// Uniform bound L on ||grad f_{i,t}||_* over the domain. Throws for unconstrained domains.
double lipschitz_bound(const LossEnsemble& ens, const MirrorGeometry& geom);

// Almost-sure bound G^2 on ||stochastic gradient||_*^2 over the domain (hence also on its second moment).
double second_moment_bound(const LossEnsemble& ens, const MirrorGeometry& geom);

}  // namespace dmd
