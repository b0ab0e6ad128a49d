#include "dmd/engine.hpp"

#include <cmath>

#include "dmd/kernels.hpp"

namespace dmd {

StepSchedule StepSchedule::constant(double eta, int horizon) {
  if (!(eta > 0.0)) throw std::invalid_argument("step size must be positive");
  if (horizon < 0) throw std::invalid_argument("horizon must be non-negative");
  StepSchedule s;
  s.kind = ScheduleKind::constant;
  s.eta0 = eta;
  s.horizon = horizon;
  return s;
}

StepSchedule StepSchedule::inv_sqrt(double eta0, int horizon) {
  StepSchedule s = constant(eta0, horizon);
  s.kind = ScheduleKind::inv_sqrt;
  return s;
}

StepSchedule StepSchedule::corollary_optimal(double path_variation, double sigma2, int horizon, double fallback_eta) {
  if (horizon < 1) throw std::invalid_argument("corollary schedule needs horizon >= 1");
  if (!(path_variation >= 0.0)) throw std::invalid_argument("path variation must be non-negative");
  if (!(sigma2 >= 0.0) || !(sigma2 < 1.0)) throw std::invalid_argument("sigma2 must lie in [0, 1)");
  StepSchedule s = constant(fallback_eta, horizon);
  s.kind = ScheduleKind::corollary_optimal;
  s.path_variation = path_variation;
  s.sigma2 = sigma2;
  return s;
}

double schedule_eta(const StepSchedule& s, int t) {
  if (t < 1 || t > s.horizon + 1) throw std::out_of_range("schedule time " + std::to_string(t) + " out of range");
  switch (s.kind) {
    case ScheduleKind::constant:
      return s.eta0;
    case ScheduleKind::inv_sqrt:
      return s.eta0 / std::sqrt(static_cast<double>(t));
    case ScheduleKind::corollary_optimal:
      if (s.uses_fallback()) return s.eta0;
      return std::sqrt((1.0 - s.sigma2) * s.path_variation / s.horizon);
  }
  return s.eta0;
}

AgentStates init_state(int n, const MirrorGeometry& geom, const std::optional<Vec>& x0) {
  if (n < 1) throw std::invalid_argument("need at least one agent");
  const int d = geom.dim();
  Vec start;
  if (x0) {
    if (!geom.domain().contains(*x0)) throw std::domain_error("initial point lies outside the domain");
    start = *x0;
  } else if (geom.kind() == MirrorKind::kl) {
    start = Vec::Constant(d, 1.0 / d);
  } else {
    start = Vec::Zero(d);
    if (!geom.domain().contains(start)) throw std::domain_error("origin lies outside the domain; pass an explicit initial point");
  }
  AgentStates s;
  s.x = start.transpose().replicate(n, 1);
  s.y = s.x;
  s.xhat = s.x;
  return s;
}

AgentStates step(const AgentStates& states, const WeightMatrix& w, const MirrorGeometry& geom, const LinearDynamics& dyn,
                 const Mat& grads, double eta, Exec exec, int step_index) {
  const auto n = states.x.rows();
  if (w.size() != n || grads.rows() != n || grads.cols() != states.x.cols() || dyn.dim() != states.x.cols())
    throw std::invalid_argument("step: inconsistent dimensions");
  if (!grads.allFinite()) throw NumericError("non-finite gradient", step_index);

  AgentStates next;
  try {
    if (exec == Exec::parallel) {
      kernels::mix_parallel(w.matrix(), states.x, next.y);
      kernels::prox_rows_parallel(geom, grads, next.y, eta, next.xhat);
      kernels::dynamics_rows_parallel(geom, dyn.matrix(), next.xhat, next.x);
    } else {
      kernels::mix_serial(w.matrix(), states.x, next.y);
      kernels::prox_rows_serial(geom, grads, next.y, eta, next.xhat);
      kernels::dynamics_rows_serial(geom, dyn.matrix(), next.xhat, next.x);
    }
  } catch (const std::overflow_error& e) {
    throw NumericError(e.what(), step_index);
  }
  if (!next.x.allFinite()) throw NumericError("non-finite iterate", step_index);
  return next;
}

RunTrace run(const RunSpec& spec, const LossEnsemble& losses) {
  const int n = spec.weights.size();
  const int d = spec.geometry.dim();
  const int horizon = spec.horizon;
  if (horizon < 0) throw std::invalid_argument("horizon must be non-negative");
  if (losses.agents() != n || losses.dim() != d) throw std::invalid_argument("loss ensemble does not match network/geometry");
  if (losses.horizon() < horizon) throw std::invalid_argument("loss ensemble is shorter than the horizon");
  if (spec.dynamics.dim() != d) throw std::invalid_argument("dynamics dimension does not match geometry");
  if (spec.schedule.horizon < horizon) throw std::invalid_argument("schedule does not reach eta_{T+1}");

  RunTrace trace;
  trace.agents = n;
  trace.dim = d;
  trace.horizon = horizon;
  trace.seed = spec.seed;
  trace.config_hash = spec.config_hash;

  std::vector<Rng> streams;
  if (spec.mode == GradientMode::stochastic) {
    streams.reserve(n);
    for (int i = 0; i < n; ++i) streams.emplace_back(derive_seed(spec.seed, static_cast<std::uint64_t>(i)));
  }

  AgentStates state = init_state(n, spec.geometry, spec.x0);
  trace.iterates.push_back(state.x);
  trace.means.push_back(kernels::row_mean(state.x));
  trace.etas.push_back(schedule_eta(spec.schedule, 1));

  for (int t = 1; t <= horizon; ++t) {
    Mat grads(n, d);
    const bool parallel = spec.exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) {
      const Vec xi = state.x.row(i).transpose();
      grads.row(i) = (spec.mode == GradientMode::stochastic ? losses.stochastic_gradient(i, t, xi, streams[i])
                                                           : losses.gradient(i, t, xi))
                         .transpose();
    }
    const double eta = trace.etas.back();
    state = step(state, spec.weights, spec.geometry, spec.dynamics, grads, eta, spec.exec, t);
    trace.gradients.push_back(std::move(grads));
    trace.mixed.push_back(state.y);
    trace.prox.push_back(state.xhat);
    trace.iterates.push_back(state.x);
    trace.means.push_back(kernels::row_mean(state.x));
    trace.etas.push_back(schedule_eta(spec.schedule, t + 1));
  }
  return trace;
}

}  // namespace dmd
