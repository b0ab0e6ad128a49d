#include "dmd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "dmd/csv.hpp"

namespace dmd {

namespace {

double geom_norm(const MirrorGeometry& geom, const Vec& v) { return geom.norm(v); }

// Euclidean projection onto {x : sum x = 1, x >= floor} (sort-based).
Vec euclidean_project_floored_simplex(const Vec& v, double floor) {
  const int d = static_cast<int>(v.size());
  const double mass = 1.0 - d * floor;
  Vec u = v.array() - floor;
  std::vector<double> s(u.data(), u.data() + d);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (int k = 0; k < d; ++k) {
    cum += s[k];
    const double cand = (cum - mass) / (k + 1);
    if (s[k] - cand > 0.0) theta = cand;
  }
  return (u.array() - theta).cwiseMax(0.0) + floor;
}

Vec mean_gradient(const LossEnsemble& losses, int t) {
  Vec g = Vec::Zero(losses.dim());
  const Vec origin = Vec::Zero(losses.dim());
  for (int i = 0; i < losses.agents(); ++i) g += losses.gradient(i, t, origin);
  return g / losses.agents();
}

}  // namespace

RegretReport dynamic_regret(const RunTrace& trace, const LossEnsemble& losses, const MinimizerPath& path,
                            const MirrorGeometry& geom, const LinearDynamics& dyn) {
  const int horizon = trace.horizon;
  if (static_cast<int>(trace.iterates.size()) != horizon + 1) throw std::invalid_argument("trace is incomplete");
  if (static_cast<int>(path.states.size()) < horizon) throw std::invalid_argument("comparator path is shorter than the horizon");
  if (losses.horizon() < horizon) throw std::invalid_argument("loss ensemble is shorter than the horizon");
  if (path.dim() != trace.dim || losses.dim() != trace.dim) throw std::invalid_argument("dimension mismatch");

  RegretReport r;
  r.per_step.reserve(horizon);
  double total = 0.0;
  for (int t = 1; t <= horizon; ++t) {
    const Mat& x = trace.x(t);
    double avg = 0.0;
    for (int i = 0; i < trace.agents; ++i) avg += losses.global_value(t, x.row(i).transpose());
    avg /= trace.agents;
    const double gap = avg - losses.global_value(t, path.at(t));
    total += gap;
    r.per_step.push_back(gap);
    r.cumulative.push_back(total);
    r.normalized.push_back(total / t);
  }
  r.dynamic_regret = total;
  if (path.states.size() >= 2) {
    for (std::size_t t = 0; t + 1 < path.states.size() && static_cast<int>(t) < horizon; ++t)
      r.path_variation += geom_norm(geom, path.states[t + 1] - dyn.apply(path.states[t]));
  }
  return r;
}

double local_regret(const RunTrace& trace, const LossEnsemble& losses, const MinimizerPath& path) {
  double total = 0.0;
  for (int t = 1; t <= trace.horizon; ++t) {
    const Mat& x = trace.x(t);
    for (int i = 0; i < trace.agents; ++i)
      total += losses.value(i, t, x.row(i).transpose()) - losses.value(i, t, path.at(t));
  }
  return total / trace.agents;
}

Vec static_comparator(const LossEnsemble& losses, const Domain& domain, int horizon) {
  if (!domain.bounded()) throw std::invalid_argument("static comparator needs a bounded domain");
  if (horizon < 1 || horizon > losses.horizon()) throw std::invalid_argument("static comparator: bad horizon");
  const int d = losses.dim();
  if (losses.kind() == LossKind::synthetic_linear) {
    Vec g = Vec::Zero(d);
    for (int t = 1; t <= horizon; ++t) g += mean_gradient(losses, t);
    Vec x(d);
    if (domain.kind() == DomainKind::box) {
      // ties (g_k = 0) pick the midpoint; every point of that edge is optimal
      for (int k = 0; k < d; ++k)
        x(k) = g(k) > 0.0 ? domain.lo()(k) : (g(k) < 0.0 ? domain.hi()(k) : 0.5 * (domain.lo()(k) + domain.hi()(k)));
      return x;
    }
    Eigen::Index best = 0;
    g.minCoeff(&best);
    x = Vec::Constant(d, domain.floor());
    x(best) = 1.0 - (d - 1) * domain.floor();
    return x;
  }
  // quadratic and tracking losses: sum_t f_t is a separable quadratic centered at the mean target
  Vec m = Vec::Zero(d);
  for (int t = 1; t <= horizon; ++t) m += losses.global_minimizer(t);
  m /= horizon;
  if (domain.kind() == DomainKind::box) return m.cwiseMax(domain.lo()).cwiseMin(domain.hi());
  return euclidean_project_floored_simplex(m, domain.floor());
}

double static_regret(const RunTrace& trace, const LossEnsemble& losses, const Domain& domain) {
  const Vec c = static_comparator(losses, domain, trace.horizon);
  double total = 0.0;
  for (int t = 1; t <= trace.horizon; ++t) {
    const Mat& x = trace.x(t);
    double avg = 0.0;
    for (int i = 0; i < trace.agents; ++i) avg += losses.global_value(t, x.row(i).transpose());
    total += avg / trace.agents - losses.global_value(t, c);
  }
  return total;
}

MinimizerPath minimizer_path(const LossEnsemble& losses, const LinearDynamics& dyn, int horizon) {
  if (losses.horizon() < horizon + 1) throw std::invalid_argument("minimizer path needs horizon + 1 loss slices");
  std::vector<Vec> states;
  states.reserve(horizon + 1);
  for (int t = 1; t <= horizon + 1; ++t) states.push_back(losses.global_minimizer(t));
  return path_from_states(dyn, std::move(states));
}

std::vector<double> network_disagreement(const RunTrace& trace, const MirrorGeometry& geom) {
  if (trace.iterates.empty()) throw std::invalid_argument("empty trace");
  std::vector<double> out;
  out.reserve(trace.iterates.size());
  for (std::size_t t = 0; t < trace.iterates.size(); ++t) {
    const Mat& x = trace.iterates[t];
    const Vec& mean = trace.means[t];
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) worst = std::max(worst, geom.norm(x.row(i).transpose() - mean));
    out.push_back(worst);
  }
  return out;
}

std::vector<double> lemma1_bound(double lipschitz, int n, double sigma2, const std::vector<double>& etas) {
  if (!(lipschitz >= 0.0)) throw std::invalid_argument("Lipschitz constant must be non-negative");
  if (!(sigma2 >= 0.0) || !(sigma2 < 1.0)) throw std::invalid_argument("sigma2 must lie in [0, 1)");
  if (n < 1) throw std::invalid_argument("need at least one agent");
  std::vector<double> out;
  if (etas.empty()) return out;
  out.reserve(etas.size());
  const double scale = lipschitz * std::sqrt(static_cast<double>(n));
  // inner_t = sum_{tau<=t} eta_tau sigma^{t-tau}; inner_0 = eta_0 = eta_1
  double inner = etas[0];
  out.push_back(scale * inner);
  for (std::size_t t = 1; t < etas.size(); ++t) {
    inner = sigma2 * inner + etas[t - 1];
    out.push_back(scale * inner);
  }
  return out;
}

namespace {

struct Sums {
  double track_fixed = 0.0;  // 2R^2/eta_{T+1} + sum K ||v_t|| / eta_{t+1}
  double mismatch = 0.0;     // 2R^2/eta_{T+1} + sum ||v_t|| / eta_{t+1}
  double eta_sum = 0.0;      // sum_{t=1}^T eta_t
  double net_sum = 0.0;      // sum_{t=1}^T sum_{tau=0}^{t-1} eta_tau sigma^{t-tau-1}
};

Sums bound_sums(const BoundInputs& in) {
  const int T = in.horizon;
  if (T < 0) throw std::invalid_argument("horizon must be non-negative");
  if (static_cast<int>(in.etas.size()) < T + 1) throw std::invalid_argument("step sizes must be given through eta_{T+1}");
  if (static_cast<int>(in.noise_norms.size()) < T) throw std::invalid_argument("noise norms must cover t = 1..T");
  if (!(in.sigma2 >= 0.0) || !(in.sigma2 < 1.0)) throw std::invalid_argument("sigma2 must lie in [0, 1)");
  if (in.agents < 1) throw std::invalid_argument("need at least one agent");
  for (int t = 0; t <= T; ++t)
    if (!(in.etas[t] > 0.0)) throw std::invalid_argument("step sizes must be positive");
  Sums s;
  const double r2 = in.constants.r2, k = in.constants.k;
  s.track_fixed = 2.0 * r2 / in.etas[T];
  s.mismatch = s.track_fixed;
  for (int t = 1; t <= T; ++t) {
    s.track_fixed += k * in.noise_norms[t - 1] / in.etas[t];
    s.mismatch += in.noise_norms[t - 1] / in.etas[t];
    s.eta_sum += in.etas[t - 1];
  }
  double inner = in.etas[0];  // tau = 0 term, eta_0 = eta_1
  for (int t = 1; t <= T; ++t) {
    s.net_sum += inner;
    if (t < T) inner = in.sigma2 * inner + in.etas[t - 1];
  }
  return s;
}

}  // namespace

BoundReport theorem1_bound(const BoundInputs& in) {
  if (!(in.lipschitz >= 0.0)) throw std::invalid_argument("Lipschitz constant must be non-negative");
  const double g = in.gradient_bound.value_or(in.lipschitz);
  if (!(g >= 0.0)) throw std::invalid_argument("gradient bound must be non-negative");
  const Sums s = bound_sums(in);
  const double root_n = std::sqrt(static_cast<double>(in.agents));
  const double l2 = in.lipschitz * in.lipschitz, g2 = g * g;

  BoundReport b;
  b.inputs = in;
  b.e_track = s.track_fixed + l2 * s.eta_sum / 2.0;
  b.e_net = 4.0 * l2 * root_n * s.net_sum;
  b.theorem1_total = b.e_track + b.e_net;
  b.theorem2_e_track = s.track_fixed + g2 * s.eta_sum / 2.0;
  b.theorem2_e_net = 4.0 * g2 * root_n * s.net_sum;
  b.theorem2_total = b.theorem2_e_track + b.theorem2_e_net;
  b.lemma2_rhs = s.mismatch;
  b.lemma4_rhs = b.e_track + 2.0 * l2 * root_n * s.net_sum;
  b.lemma1_curve = lemma1_bound(in.lipschitz, in.agents, in.sigma2,
                                std::vector<double>(in.etas.begin(), in.etas.begin() + in.horizon + 1));
  b.path_variation = std::accumulate(in.noise_norms.begin(), in.noise_norms.begin() + in.horizon, 0.0);
  return b;
}

CorollaryBound corollary1_bound(const GeometryConstants& constants, double lipschitz, double sigma2, double path_variation,
                                int agents, int horizon, std::optional<double> fallback_eta) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(path_variation >= 0.0)) throw std::invalid_argument("path variation must be non-negative");
  if (!(sigma2 >= 0.0) || !(sigma2 < 1.0)) throw std::invalid_argument("sigma2 must lie in [0, 1)");
  CorollaryBound c;
  if (path_variation > 0.0) {
    c.eta = std::sqrt((1.0 - sigma2) * path_variation / horizon);
  } else {
    if (!fallback_eta || !(*fallback_eta > 0.0)) throw std::invalid_argument("C_T = 0 needs a fallback step size");
    c.eta = *fallback_eta;
    c.used_fallback = true;
  }
  BoundInputs in;
  in.constants = constants;
  in.lipschitz = lipschitz;
  in.sigma2 = sigma2;
  in.etas.assign(horizon + 1, c.eta);
  // with a constant step only the total C_T enters the tracking term
  in.noise_norms.assign(horizon, 0.0);
  in.noise_norms[0] = path_variation;
  in.agents = agents;
  in.horizon = horizon;
  c.value = theorem1_bound(in).theorem1_total;
  return c;
}

void write_regret_csv(std::ostream& out, const RegretReport& r) {
  out << "t,per_step,cumulative,normalized\n";
  for (std::size_t t = 0; t < r.per_step.size(); ++t)
    out << (t + 1) << ',' << csv::number(r.per_step[t]) << ',' << csv::number(r.cumulative[t]) << ','
        << csv::number(r.normalized[t]) << '\n';
}

void write_bounds_csv(std::ostream& out, const BoundReport& b) {
  const auto& in = b.inputs;
  out << "key,value\n";
  auto row = [&](const char* key, double v) { out << key << ',' << csv::number(v) << '\n'; };
  row("e_track", b.e_track);
  row("e_net", b.e_net);
  row("theorem1_total", b.theorem1_total);
  row("theorem2_e_track", b.theorem2_e_track);
  row("theorem2_e_net", b.theorem2_e_net);
  row("theorem2_total", b.theorem2_total);
  row("lemma2_rhs", b.lemma2_rhs);
  row("lemma4_rhs", b.lemma4_rhs);
  row("path_variation", b.path_variation);
  row("lipschitz", in.lipschitz);
  row("gradient_bound", in.gradient_bound.value_or(in.lipschitz));
  row("r2", in.constants.r2);
  row("k", in.constants.k);
  row("sigma2", in.sigma2);
  row("agents", in.agents);
  row("horizon", in.horizon);
  row("eta_final", in.etas.empty() ? 0.0 : in.etas.back());
}

}  // namespace dmd
