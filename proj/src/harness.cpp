#include "dmd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "dmd/csv.hpp"

namespace dmd {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kNetworkStream = 3003;
constexpr std::uint64_t kPathStream = 1001;
constexpr std::uint64_t kLossStream = 2002;
constexpr std::uint64_t kEngineStream = 7;

int state_dim(const ExperimentConfig& c) {
  if (c.scenario == Scenario::tracking || c.dynamics == "ncv") return 4;
  return c.dim;
}

MinimizerPath comparator_path(const ExperimentConfig& c, const LinearDynamics& dyn, std::uint64_t master, std::uint64_t seed) {
  const Vec x0 = Eigen::Map<const Vec>(c.target_x0.data(), static_cast<Eigen::Index>(c.target_x0.size()));
  if (c.noise == "file") {
    std::ifstream in(c.noise_file);
    if (!in) throw ConfigError("noise.file", "cannot open '" + c.noise_file + "'");
    MinimizerPath from_file = read_path_csv(in);
    if (from_file.dim() != dyn.dim()) throw ConfigError("noise.file", "path dimension does not match the dynamics");
    if (static_cast<int>(from_file.states.size()) < c.horizon + 1) throw ConfigError("noise.file", "path is shorter than the horizon");
    from_file.states.resize(c.horizon + 1);
    return path_from_states(dyn, std::move(from_file.states));
  }
  if (x0.size() != dyn.dim()) throw ConfigError("target.x0", fmt::format("expected {} entries", dyn.dim()));
  NoiseModel noise;
  if (c.noise == "gaussian_ncv") {
    const std::uint64_t path_seed = derive_seed(c.fixed_path ? master : seed, kPathStream);
    noise = NoiseModel::gaussian_ncv(c.eps, c.sigma_v2, path_seed);
  } else if (c.noise == "constant_drift") {
    if (static_cast<int>(c.drift.size()) != dyn.dim()) throw ConfigError("noise.drift", fmt::format("expected {} entries", dyn.dim()));
    noise = NoiseModel::constant_drift(Eigen::Map<const Vec>(c.drift.data(), dyn.dim()));
  }
  return generate_path(dyn, noise, x0, c.horizon);
}

void require_inside(const MinimizerPath& path, const Domain& dom) {
  for (std::size_t t = 0; t < path.states.size(); ++t)
    if (!dom.contains(path.states[t], 0.0))
      throw ConfigError("geometry.box", fmt::format("target path leaves the domain at t = {}", t + 1));
}

StepSchedule build_schedule(const ExperimentConfig& c, double path_variation, double sigma2) {
  if (c.schedule == "inv_sqrt") return StepSchedule::inv_sqrt(c.eta, c.horizon);
  if (c.schedule == "corollary_optimal") return StepSchedule::corollary_optimal(path_variation, sigma2, c.horizon, c.eta);
  return StepSchedule::constant(c.eta, c.horizon);
}

NormKind norm_kind(const MirrorGeometry& geom) { return geom.kind() == MirrorKind::kl ? NormKind::l1 : NormKind::l2; }

struct Slack {
  double min = 0.0;
  int t = 0;
  double bound = 0.0, observed = 0.0;
};

// min over t of bound[t] - observed[t]; t reported 1-based.
Slack curve_slack(const std::vector<double>& bound, const std::vector<double>& observed) {
  Slack s;
  s.min = INFINITY;
  const std::size_t len = std::min(bound.size(), observed.size());
  for (std::size_t t = 0; t < len; ++t) {
    const double gap = bound[t] - observed[t];
    if (gap < s.min) {
      s = {gap, static_cast<int>(t + 1), bound[t], observed[t]};
    }
  }
  if (len == 0) s.min = 0.0;
  return s;
}

void write_text(const fs::path& file, const std::string& body, std::vector<std::string>& files) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << body;
  files.push_back(file.filename().string());
}

}  // namespace

std::uint64_t run_seed(std::uint64_t master, int run) { return derive_seed(master, static_cast<std::uint64_t>(run)); }

std::string csv_preamble(const std::string& hash, std::uint64_t seed) { return fmt::format("# config_hash={} seed={}\n", hash, seed); }

Network build_network(const ExperimentConfig& c, std::uint64_t seed) {
  Graph g = c.graph == "grid"       ? build_grid_graph(c.rows, c.cols)
            : c.graph == "complete" ? complete_graph(c.nodes)
                                    : random_connected_graph(c.nodes, c.edge_prob, seed);
  WeightMatrix w = c.weights == "uniform" ? uniform_complete_weights(g.size()) : metropolis_weights(g);
  const SpectralInfo s = second_singular_value(w);
  return Network{std::move(g), std::move(w), s};
}

MirrorGeometry build_geometry(const ExperimentConfig& c) {
  const int d = state_dim(c);
  if (c.mirror == "kl") return MirrorGeometry::kl(Domain::simplex(d, c.floor));
  return MirrorGeometry::euclidean(Domain::box(Vec::Constant(d, -c.box), Vec::Constant(d, c.box)));
}

LinearDynamics build_dynamics(const ExperimentConfig& c) {
  if (c.dynamics == "ncv") return ncv_dynamics(c.eps);
  return identity_dynamics(state_dim(c), c.scale);
}

Replicate run_replicate(const ExperimentConfig& c, std::uint64_t master, int run) {
  Replicate rep;
  rep.seed = run_seed(master, run);
  const Network net = build_network(c, derive_seed(master, kNetworkStream));
  const MirrorGeometry geom = build_geometry(c);
  const LinearDynamics dyn = build_dynamics(c);
  const int n = net.graph.size();
  const int T = c.horizon;
  rep.sigma2 = net.spectral.sigma2;

  std::optional<LossEnsemble> losses;
  if (c.scenario == Scenario::tracking) {
    rep.path = comparator_path(c, dyn, master, rep.seed);
    for (const auto& x : rep.path.states)
      if (!geom.domain().contains(x, 0.0)) ++rep.target_exits;
    const auto conv = c.convention == "literal" ? GradientConvention::literal : GradientConvention::exact;
    losses = LossEnsemble::tracking(rep.path, ObservationModel::grouped(n, 4, c.halfwidth), conv);
  } else if (c.scenario == Scenario::custom) {
    rep.path = comparator_path(c, dyn, master, rep.seed);
    require_inside(rep.path, geom.domain());
    const int d = dyn.dim();
    Rng rng(derive_seed(rep.seed, kLossStream));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat offsets(n, d);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < d; ++k) offsets(i, k) = c.offset * u(rng);
    offsets.rowwise() -= offsets.colwise().mean();
    std::vector<Mat> centers;
    centers.reserve(rep.path.states.size());
    for (const auto& x : rep.path.states) {
      Mat ct = offsets.rowwise() + x.transpose();
      centers.push_back(ct.cwiseMax(-c.box).cwiseMin(c.box));
    }
    losses = LossEnsemble::quadratic(std::move(centers), c.gradient_noise);
    rep.path = minimizer_path(*losses, dyn, T);
  } else {
    SyntheticOptions opt;
    opt.kind = c.loss == "linear" ? LossKind::synthetic_linear : LossKind::synthetic_quadratic;
    opt.dynamics = dyn.matrix();
    opt.drift = c.synthetic_drift;
    opt.spread = c.spread;
    opt.gradient_noise = c.gradient_noise;
    losses = synthetic_suite(derive_seed(rep.seed, kLossStream), n, geom.dim(), T, geom, opt);
    rep.path = minimizer_path(*losses, dyn, T);
  }

  const double c_t = path_variation(rep.path, dyn, norm_kind(geom));
  RunSpec spec{net.weights, geom, dyn, build_schedule(c, c_t, rep.sigma2), GradientMode::exact, 0, 0, std::nullopt, Exec::serial, ""};
  spec.mode = c.gradient == "stochastic" ? GradientMode::stochastic : GradientMode::exact;
  spec.horizon = T;
  spec.seed = derive_seed(rep.seed, kEngineStream);
  spec.exec = c.exec == "parallel" ? Exec::parallel : Exec::serial;
  spec.config_hash = c.hash;
  rep.eta_fallback = spec.schedule.uses_fallback();
  rep.eta_corollary = c.schedule == "corollary_optimal" ? schedule_eta(spec.schedule, 1) : 0.0;

  rep.trace = dmd::run(spec, *losses);
  rep.regret = dynamic_regret(rep.trace, *losses, rep.path, geom, dyn);
  rep.regret.static_regret = static_regret(rep.trace, *losses, geom.domain());
  rep.disagreement = network_disagreement(rep.trace, geom);

  if (const auto consts = geometry_constants(geom)) {
    BoundInputs in;
    in.constants = *consts;
    in.lipschitz = lipschitz_bound(*losses, geom);
    in.gradient_bound = std::sqrt(second_moment_bound(*losses, geom));
    in.sigma2 = rep.sigma2;
    in.etas = rep.trace.etas;
    for (const auto& v : rep.path.noise) in.noise_norms.push_back(geom.norm(v));
    in.agents = n;
    in.horizon = T;
    rep.bounds = theorem1_bound(in);
    const bool exact = spec.mode == GradientMode::exact;
    rep.gradient_bound = exact ? in.lipschitz : *in.gradient_bound;
    const auto curve = exact ? rep.bounds->lemma1_curve : lemma1_bound(rep.gradient_bound, n, rep.sigma2, rep.trace.etas);
    const Slack s = curve_slack(curve, rep.disagreement);
    rep.lemma1_min_slack = s.min;
    rep.lemma1_worst_t = s.t;
    if (exact) rep.theorem1_slack = rep.bounds->theorem1_total - rep.regret.dynamic_regret;
  }

  const int window = std::min(100, T);
  rep.agent_tracking_error.assign(n, 0.0);
  for (int t = T - window + 1; t <= T; ++t)
    for (int i = 0; i < n; ++i)
      rep.agent_tracking_error[i] += (rep.trace.x(t).row(i).transpose() - rep.path.at(t)).norm() / window;
  if (dyn.dim() == 4 && c.dynamics == "ncv") {
    for (std::size_t t = 0; t + 1 < rep.path.states.size(); ++t) {
      const Vec& a = rep.path.states[t];
      const Vec& b = rep.path.states[t + 1];
      rep.position_path_length += std::hypot(b(0) - a(0), b(2) - a(2));
    }
  }
  return rep;
}

RunOutcome run_experiment(const ExperimentConfig& c, std::uint64_t master, const fs::path& out) {
  RunOutcome o;
  o.replicate = run_replicate(c, master, 0);
  const Replicate& r = o.replicate;
  const RunTrace& tr = r.trace;
  fs::create_directories(out);
  const std::string pre = csv_preamble(c.hash, master);
  const int d = tr.dim;

  auto agent_rows = [&](const std::vector<Mat>& mats, const char* prefix) {
    std::ostringstream s;
    s << pre << "t,agent";
    for (int k = 1; k <= d; ++k) s << ',' << prefix << k;
    s << '\n';
    for (std::size_t t = 0; t < mats.size(); ++t)
      for (Eigen::Index i = 0; i < mats[t].rows(); ++i) {
        s << (t + 1) << ',' << i;
        for (int k = 0; k < d; ++k) s << ',' << csv::number(mats[t](i, k));
        s << '\n';
      }
    return s.str();
  };
  write_text(out / "iterates.csv", agent_rows(tr.iterates, "x"), o.files);
  write_text(out / "gradients.csv", agent_rows(tr.gradients, "g"), o.files);
  {
    std::ostringstream s;
    s << pre << "t,eta\n";
    for (std::size_t t = 0; t < tr.etas.size(); ++t) s << (t + 1) << ',' << csv::number(tr.etas[t]) << '\n';
    write_text(out / "eta.csv", s.str(), o.files);
  }
  {
    std::ostringstream s;
    s << pre;
    write_path_csv(s, r.path);
    write_text(out / "path.csv", s.str(), o.files);
  }
  {
    std::ostringstream s;
    s << pre;
    write_regret_csv(s, r.regret);
    write_text(out / "regret.csv", s.str(), o.files);
  }
  {
    std::ostringstream s;
    s << pre << "t,disagreement,lemma1_bound\n";
    const std::vector<double> curve =
        r.bounds ? lemma1_bound(r.gradient_bound, tr.agents, r.sigma2, tr.etas) : std::vector<double>(r.disagreement.size(), NAN);
    for (std::size_t t = 0; t < r.disagreement.size(); ++t)
      s << (t + 1) << ',' << csv::number(r.disagreement[t]) << ',' << csv::number(curve[t]) << '\n';
    write_text(out / "disagreement.csv", s.str(), o.files);
  }
  {
    std::ostringstream s;
    s << pre << "t,source";
    for (int k = 1; k <= d; ++k) s << ",x" << k;
    s << '\n';
    for (int t = 1; t <= tr.horizon + 1; ++t) {
      s << t << ",target";
      for (int k = 0; k < d; ++k) s << ',' << csv::number(r.path.at(t)(k));
      s << '\n';
      for (int i = 0; i < tr.agents; ++i) {
        s << t << ",agent" << i;
        for (int k = 0; k < d; ++k) s << ',' << csv::number(tr.x(t)(i, k));
        s << '\n';
      }
    }
    write_text(out / "trajectory.csv", s.str(), o.files);
  }
  if (r.bounds) {
    std::ostringstream s;
    s << pre;
    write_bounds_csv(s, *r.bounds);
    write_text(out / "bounds.csv", s.str(), o.files);
  }
  {
    std::ostringstream s;
    s << pre << "key,value\n";
    auto row = [&](const std::string& key, double v) { s << key << ',' << csv::number(v) << '\n'; };
    row("dynamic_regret", r.regret.dynamic_regret);
    row("static_regret", r.regret.static_regret.value_or(NAN));
    row("normalized_regret", r.regret.normalized.empty() ? 0.0 : r.regret.normalized.back());
    row("path_variation", r.regret.path_variation);
    row("sigma2", r.sigma2);
    row("eta_fallback", r.eta_fallback ? 1.0 : 0.0);
    if (c.schedule == "corollary_optimal") row("eta_corollary", r.eta_corollary);
    row("position_path_length", r.position_path_length);
    row("target_exits", r.target_exits);
    double worst = 0.0, mean = 0.0;
    for (double e : r.agent_tracking_error) {
      worst = std::max(worst, e);
      mean += e / r.agent_tracking_error.size();
    }
    row("mean_tracking_error", mean);
    row("max_agent_tracking_error", worst);
    if (r.bounds) {
      row("lemma1_min_slack", r.lemma1_min_slack);
      row("lemma1_worst_t", r.lemma1_worst_t);
    }
    if (r.theorem1_slack) row("theorem1_slack", *r.theorem1_slack);
    write_text(out / "summary.csv", s.str(), o.files);
  }
  o.violation = (r.bounds && r.lemma1_min_slack < -kDominanceSlack) || (r.theorem1_slack && *r.theorem1_slack < -kDominanceSlack);
  return o;
}

SweepResult sweep(const ExperimentConfig& c, const std::string& param, const std::vector<std::string>& values, int runs,
                  std::uint64_t master) {
  if (values.empty()) throw ConfigError(param, "sweep needs at least one value");
  if (runs < 1) throw ConfigError("experiment.runs", "must be >= 1");
  std::vector<ExperimentConfig> configs;
  for (const auto& v : values) {
    ExperimentConfig cv = with_value(c, param, v, true);
    cv.exec = "serial";  // parallelism is across replicates
    configs.push_back(std::move(cv));
  }
  const int nv = static_cast<int>(values.size());
  const int total = nv * runs;
  std::vector<std::vector<double>> curves(total);
  std::vector<std::exception_ptr> errors(total);
#pragma omp parallel for schedule(dynamic)
  for (int job = 0; job < total; ++job) {
    try {
      curves[job] = run_replicate(configs[job / runs], master, job % runs).regret.normalized;
    } catch (...) {
      errors[job] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SweepResult r;
  r.param = param;
  r.values = values;
  r.runs = runs;
  for (int v = 0; v < nv; ++v) {
    const std::size_t len = curves[v * runs].size();
    std::vector<double> mean(len, 0.0), sd(len, 0.0);
    for (int k = 0; k < runs; ++k)
      for (std::size_t t = 0; t < len; ++t) mean[t] += curves[v * runs + k][t];
    for (auto& m : mean) m /= runs;
    for (int k = 0; k < runs; ++k)
      for (std::size_t t = 0; t < len; ++t) {
        const double e = curves[v * runs + k][t] - mean[t];
        sd[t] += e * e;
      }
    for (auto& s : sd) s = std::sqrt(s / runs);
    r.final_mean.push_back(len ? mean.back() : 0.0);
    r.final_std.push_back(len ? sd.back() : 0.0);
    r.mean.push_back(std::move(mean));
    r.stddev.push_back(std::move(sd));
  }
  return r;
}

void write_sweep(const SweepResult& r, const ExperimentConfig& c, std::uint64_t master, const fs::path& out) {
  fs::create_directories(out);
  const std::string pre = csv_preamble(c.hash, master);
  std::vector<std::string> files;
  {
    std::ostringstream s;
    s << pre << "value,t,mean,std\n";
    for (std::size_t v = 0; v < r.values.size(); ++v)
      for (std::size_t t = 0; t < r.mean[v].size(); ++t)
        s << r.values[v] << ',' << (t + 1) << ',' << csv::number(r.mean[v][t]) << ',' << csv::number(r.stddev[v][t]) << '\n';
    write_text(out / "sweep.csv", s.str(), files);
  }
  {
    std::ostringstream s;
    s << pre << "param,value,runs,final_mean,final_std\n";
    for (std::size_t v = 0; v < r.values.size(); ++v)
      s << r.param << ',' << r.values[v] << ',' << r.runs << ',' << csv::number(r.final_mean[v]) << ','
        << csv::number(r.final_std[v]) << '\n';
    write_text(out / "sweep_summary.csv", s.str(), files);
  }
}

namespace {

struct VerifyCase {
  std::string label;
  bool kl = false;
  double a_scale = 1.0;
  int n = 4;
  int horizon = 100;
  bool linear = false;
  bool complete = false;
  bool inv_sqrt = false;
};

std::vector<VerifyCase> verify_cases(bool include_kl) {
  std::vector<VerifyCase> cases;
  struct G {
    bool kl;
    double a;
  };
  std::vector<G> geoms = {{false, 1.0}, {false, 0.9}};
  if (include_kl) geoms.push_back({true, 1.0});
  for (const auto& g : geoms)
    for (int n : {4, 9})
      for (int T : {100, 300})
        for (bool linear : {false, true})
          for (bool complete : {false, true})
            for (bool inv_sqrt : {false, true}) {
              VerifyCase vc{"", g.kl, g.a, n, T, linear, complete, inv_sqrt};
              vc.label = fmt::format("{}/A={}I/n={}/T={}/{}/{}/{}", g.kl ? "kl" : "euclidean", g.a, n, T,
                                     linear ? "linear" : "quadratic", complete ? "complete" : "random",
                                     inv_sqrt ? "inv_sqrt0.5" : "constant0.1");
              cases.push_back(std::move(vc));
            }
  return cases;
}

std::vector<VerifyRow> verify_case(const VerifyCase& vc, std::uint64_t seed, std::uint64_t case_seed, const VerifyOptions& opt) {
  const int d = 3;
  const MirrorGeometry geom = vc.kl ? MirrorGeometry::kl(Domain::simplex(d, 0.02))
                                    : MirrorGeometry::euclidean(Domain::box(Vec::Constant(d, -1.0), Vec::Constant(d, 1.0)));
  const LinearDynamics dyn = identity_dynamics(d, vc.a_scale);
  const Graph g = vc.complete ? complete_graph(vc.n) : random_connected_graph(vc.n, 0.5, derive_seed(case_seed, 1));
  const WeightMatrix w = metropolis_weights(g);
  const double sigma2 = second_singular_value(w).sigma2;

  SyntheticOptions so;
  so.kind = vc.linear ? LossKind::synthetic_linear : LossKind::synthetic_quadratic;
  so.dynamics = dyn.matrix();
  so.gradient_noise = 0.1;
  const LossEnsemble losses = synthetic_suite(derive_seed(case_seed, 2), vc.n, d, vc.horizon, geom, so);
  const MinimizerPath path = minimizer_path(losses, dyn, vc.horizon);
  const StepSchedule sched = vc.inv_sqrt ? StepSchedule::inv_sqrt(0.5, vc.horizon) : StepSchedule::constant(0.1, vc.horizon);

  BoundInputs in;
  in.constants = *geometry_constants(geom);
  in.lipschitz = opt.lipschitz_scale * lipschitz_bound(losses, geom);
  in.gradient_bound = opt.lipschitz_scale * std::sqrt(second_moment_bound(losses, geom));
  in.sigma2 = sigma2;
  for (int t = 1; t <= vc.horizon + 1; ++t) in.etas.push_back(schedule_eta(sched, t));
  for (const auto& v : path.noise) in.noise_norms.push_back(geom.norm(v));
  in.agents = vc.n;
  in.horizon = vc.horizon;
  const BoundReport b = theorem1_bound(in);

  RunSpec spec{w, geom, dyn, sched, GradientMode::exact, 0, 0, std::nullopt, Exec::serial, ""};
  spec.horizon = vc.horizon;
  std::vector<VerifyRow> rows;
  auto add = [&](const std::string& check, double bound, double observed, int t) {
    VerifyRow r;
    r.seed = seed;
    r.config = vc.label;
    r.check = check;
    r.bound = bound;
    r.observed = observed;
    r.slack = bound - observed;
    r.t_index = t;
    r.pass = r.slack >= -kDominanceSlack;
    rows.push_back(std::move(r));
  };

  if (opt.exact) {
    spec.mode = GradientMode::exact;
    spec.seed = case_seed;
    const RunTrace tr = run(spec, losses);
    const Slack s = curve_slack(b.lemma1_curve, network_disagreement(tr, geom));
    add("lemma1", s.bound, s.observed, s.t);
    add("theorem1", b.theorem1_total, dynamic_regret(tr, losses, path, geom, dyn).dynamic_regret, vc.horizon);
    add("lemma4", b.lemma4_rhs, local_regret(tr, losses, path), vc.horizon);
  }
  if (opt.stochastic && opt.replicates > 0) {
    spec.mode = GradientMode::stochastic;
    const auto curve = lemma1_bound(*in.gradient_bound, vc.n, sigma2, in.etas);
    Slack worst;
    worst.min = INFINITY;
    double mean_regret = 0.0;
    for (int r = 0; r < opt.replicates; ++r) {
      spec.seed = derive_seed(case_seed, 100 + static_cast<std::uint64_t>(r));
      const RunTrace tr = run(spec, losses);
      const Slack s = curve_slack(curve, network_disagreement(tr, geom));
      if (s.min < worst.min) worst = s;
      mean_regret += dynamic_regret(tr, losses, path, geom, dyn).dynamic_regret / opt.replicates;
    }
    add("lemma1_stochastic", worst.bound, worst.observed, worst.t);
    add("theorem2", b.theorem2_total, mean_regret, vc.horizon);
  }
  return rows;
}

}  // namespace

VerifyReport verify_bounds(int seeds, const VerifyOptions& options) {
  if (seeds < 1) throw ConfigError("seeds", "must be >= 1");
  const auto cases = verify_cases(options.include_kl);
  const int nc = static_cast<int>(cases.size());
  const int total = seeds * nc;
  std::vector<std::vector<VerifyRow>> out(total);
  std::vector<std::exception_ptr> errors(total);
#pragma omp parallel for schedule(dynamic)
  for (int job = 0; job < total; ++job) {
    const auto seed = static_cast<std::uint64_t>(job / nc);
    const int k = job % nc;
    try {
      out[job] = verify_case(cases[k], seed, derive_seed(seed, static_cast<std::uint64_t>(k)), options);
    } catch (...) {
      errors[job] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  VerifyReport rep;
  for (auto& rows : out)
    for (auto& r : rows) {
      if (!r.pass) ++rep.violations;
      rep.rows.push_back(std::move(r));
    }
  return rep;
}

void write_verify_csv(const VerifyReport& r, const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ostringstream s;
  std::uint64_t seeds = 0;
  for (const auto& row : r.rows) seeds = std::max(seeds, row.seed + 1);
  s << csv_preamble(hash_values({{"verify.seeds", std::to_string(seeds)}}), seeds);
  s << "seed,config,check,bound,observed,slack,t_index,pass\n";
  for (const auto& row : r.rows)
    s << row.seed << ',' << row.config << ',' << row.check << ',' << csv::number(row.bound) << ',' << csv::number(row.observed)
      << ',' << csv::number(row.slack) << ',' << row.t_index << ',' << (row.pass ? "pass" : "FAIL") << '\n';
  std::vector<std::string> files;
  write_text(file, s.str(), files);
}

}  // namespace dmd
