#include <doctest.h>

#include <cmath>
#include <numeric>

#include "dmd/engine.hpp"
#include "dmd/metrics.hpp"

using namespace dmd;

namespace {

MirrorGeometry unit_box(int d) { return MirrorGeometry::euclidean(Domain::box(Vec::Constant(d, -1.0), Vec::Constant(d, 1.0))); }

RunSpec make_spec(WeightMatrix w, MirrorGeometry g, LinearDynamics a, StepSchedule s, int T) {
  return RunSpec{std::move(w), std::move(g), std::move(a), s, GradientMode::exact, T, 0, std::nullopt, Exec::serial, ""};
}

// Naive double sums, independent of the recursions in the library.
double naive_net_sum(double sigma, const std::vector<double>& etas, int T) {
  double total = 0.0;
  for (int t = 1; t <= T; ++t)
    for (int tau = 0; tau <= t - 1; ++tau) {
      const double eta = tau == 0 ? etas[0] : etas[tau - 1];
      total += eta * std::pow(sigma, t - tau - 1);
    }
  return total;
}

double naive_lemma1(double L, int n, double sigma, const std::vector<double>& etas, int t) {
  double s = 0.0;
  for (int tau = 0; tau <= t; ++tau) s += (tau == 0 ? etas[0] : etas[tau - 1]) * std::pow(sigma, t - tau);
  return L * std::sqrt(static_cast<double>(n)) * s;
}

BoundInputs sample_inputs() {
  BoundInputs in;
  in.constants = {2.0, 2.5};
  in.lipschitz = 1.5;
  in.gradient_bound = 2.0;
  in.sigma2 = 0.6;
  in.agents = 5;
  in.horizon = 40;
  for (int t = 1; t <= 41; ++t) in.etas.push_back(0.3 / std::sqrt(t));
  for (int t = 1; t <= 40; ++t) in.noise_norms.push_back(0.01 * (t % 7));
  return in;
}

}  // namespace

TEST_CASE("lemma 1 bound examples") {
  const auto b = lemma1_bound(1.0, 3, 2.0 / 3.0, std::vector<double>(5, 0.1));
  CHECK(b[1] == doctest::Approx(std::sqrt(3.0) * 0.1 * (2.0 / 3.0 + 1.0)).epsilon(1e-12));
  CHECK(b[1] == doctest::Approx(0.28868).epsilon(1e-5));
  for (double v : lemma1_bound(2.0, 4, 0.0, std::vector<double>(6, 0.25))) CHECK(v == doctest::Approx(2.0 * 2.0 * 0.25));
  for (double v : lemma1_bound(0.0, 4, 0.5, std::vector<double>(6, 0.25))) CHECK(v == 0.0);
  CHECK_THROWS(lemma1_bound(1.0, 3, 1.0, {0.1}));

  std::vector<double> etas;
  for (int t = 1; t <= 30; ++t) etas.push_back(1.0 / t);
  const auto r = lemma1_bound(1.3, 7, 0.8, etas);
  for (int t = 0; t < 30; ++t) CHECK(r[t] == doctest::Approx(naive_lemma1(1.3, 7, 0.8, etas, t)).epsilon(1e-12));
}

TEST_CASE("theorem 1 components against independent sums") {
  const BoundInputs in = sample_inputs();
  const BoundReport b = theorem1_bound(in);
  double track = 2.0 * in.constants.r2 / in.etas[40], mismatch = track, eta_sum = 0.0;
  for (int t = 1; t <= 40; ++t) {
    track += in.constants.k * in.noise_norms[t - 1] / in.etas[t];
    mismatch += in.noise_norms[t - 1] / in.etas[t];
    eta_sum += in.etas[t - 1];
  }
  const double net = naive_net_sum(in.sigma2, in.etas, 40);
  const double rn = std::sqrt(5.0);
  CHECK(b.e_track == doctest::Approx(track + 1.5 * 1.5 * eta_sum / 2).epsilon(1e-12));
  CHECK(b.e_net == doctest::Approx(4 * 1.5 * 1.5 * rn * net).epsilon(1e-12));
  CHECK(b.theorem2_total == doctest::Approx(track + 4.0 * eta_sum / 2 + 4 * 4.0 * rn * net).epsilon(1e-12));
  CHECK(b.lemma2_rhs == doctest::Approx(mismatch).epsilon(1e-12));
  CHECK(b.lemma4_rhs == doctest::Approx(b.e_track + 2 * 1.5 * 1.5 * rn * net).epsilon(1e-12));
  CHECK(b.lemma4_rhs <= b.theorem1_total);
  CHECK(b.path_variation == doctest::Approx(std::accumulate(in.noise_norms.begin(), in.noise_norms.end(), 0.0)));
  CHECK(b.e_track >= 0);
  CHECK(std::isfinite(b.theorem1_total));
}

TEST_CASE("theorem 1 closed cases and scaling") {
  BoundInputs in;
  in.constants = {3.0, 1.0};
  in.lipschitz = 2.0;
  in.sigma2 = 0.0;
  in.agents = 4;
  in.horizon = 50;
  in.etas.assign(51, 0.2);
  in.noise_norms.assign(50, 0.0);
  const BoundReport b = theorem1_bound(in);
  CHECK(b.e_track == doctest::Approx(2 * 3.0 / 0.2 + 4.0 * 50 * 0.2 / 2));
  // sigma2 = 0 leaves the tau = t-1 term: E_Net = 4 L^2 sqrt(n) T eta
  CHECK(b.e_net == doctest::Approx(4 * 4.0 * 2.0 * 50 * 0.2));
  CHECK(b.lemma2_rhs == doctest::Approx(2 * 3.0 / 0.2));
  CHECK((b.lemma4_rhs - b.e_track) / b.e_net == doctest::Approx(0.5));

  BoundInputs doubled = in;
  doubled.lipschitz = 4.0;
  const BoundReport d = theorem1_bound(doubled);
  CHECK(d.e_net == doctest::Approx(4 * b.e_net));
  CHECK(d.e_track - 2 * 3.0 / 0.2 == doctest::Approx(4 * (b.e_track - 2 * 3.0 / 0.2)));

  BoundInputs missing = in;
  missing.etas.pop_back();
  CHECK_THROWS(theorem1_bound(missing));
}

TEST_CASE("property: bound calculators are monotone in L, G, C_T and R2") {
  const BoundInputs base = sample_inputs();
  const BoundReport b0 = theorem1_bound(base);
  auto bumped = [&](auto&& change) {
    BoundInputs in = base;
    change(in);
    return theorem1_bound(in);
  };
  const auto checks = {bumped([](BoundInputs& in) { in.lipschitz *= 1.3; }),
                       bumped([](BoundInputs& in) { in.constants.r2 *= 1.3; }),
                       bumped([](BoundInputs& in) { in.constants.k *= 1.3; }),
                       bumped([](BoundInputs& in) { in.noise_norms[7] += 0.5; })};
  for (const auto& b : checks) {
    CHECK(b.theorem1_total >= b0.theorem1_total);
    CHECK(b.theorem2_total >= b0.theorem2_total);
    CHECK(b.lemma4_rhs >= b0.lemma4_rhs);
    CHECK(b.lemma2_rhs >= b0.lemma2_rhs);
  }
  CHECK(bumped([](BoundInputs& in) { in.gradient_bound = 3.0; }).theorem2_total >= b0.theorem2_total);

  const GeometryConstants k{2.0, 1.0};
  CHECK(corollary1_bound(k, 1.2, 0.5, 4.0, 5, 100).value >= corollary1_bound(k, 1.0, 0.5, 4.0, 5, 100).value);
  CHECK(corollary1_bound({2.5, 1.0}, 1.0, 0.5, 4.0, 5, 100).value >= corollary1_bound(k, 1.0, 0.5, 4.0, 5, 100).value);
}

TEST_CASE("corollary bound scaling") {
  const GeometryConstants k{2.0, 2.0};
  const auto b1 = corollary1_bound(k, 1.0, 0.5, 10.0, 4, 1000);
  const auto b4 = corollary1_bound(k, 1.0, 0.5, 10.0, 4, 4000);
  CHECK(b1.eta == doctest::Approx(std::sqrt(0.5 * 10.0 / 1000)));
  CHECK(b4.value / b1.value <= 2.1);
  CHECK(b4.value / b1.value > 1.0);

  const auto c4 = corollary1_bound(k, 1.0, 0.5, 40.0, 4, 1000);
  CHECK(c4.value / b1.value == doctest::Approx(2.0).epsilon(0.05));

  const auto s0 = corollary1_bound(k, 1.0, 0.0, 10.0, 4, 100000);
  const auto s999 = corollary1_bound(k, 1.0, 0.999, 10.0, 4, 100000);
  CHECK(s999.value / s0.value == doctest::Approx(std::sqrt(1000.0)).epsilon(0.2));

  CHECK_THROWS(corollary1_bound(k, 1.0, 0.5, 0.0, 4, 100));
  const auto fb = corollary1_bound(k, 1.0, 0.5, 0.0, 4, 100, 0.1);
  CHECK(fb.used_fallback);
  CHECK(fb.eta == 0.1);
}

TEST_CASE("dynamic regret examples") {
  // one agent, one step, coordinate gap 1
  const MinimizerPath path = path_from_states(identity_dynamics(4), {Vec::Zero(4), Vec::Zero(4)});
  ObservationModel obs;
  obs.coordinate = {0};
  const LossEnsemble ens = LossEnsemble::tracking(path, obs, GradientConvention::literal);
  const auto box = unit_box(4);
  RunSpec spec = make_spec(WeightMatrix(Mat::Identity(1, 1)), box, identity_dynamics(4), StepSchedule::constant(0.1, 1), 1);
  spec.x0 = (Vec(4) << 1.0, 0, 0, 0).finished();
  const RunTrace tr = run(spec, ens);
  const RegretReport r = dynamic_regret(tr, ens, path, box, identity_dynamics(4));
  CHECK(r.dynamic_regret == doctest::Approx(1.0));

  // iterates pinned at the comparator give zero regret
  const Vec c = (Vec(2) << 0.2, -0.1).finished();
  std::vector<Mat> centers(11, c.transpose().replicate(3, 1));
  const LossEnsemble q = LossEnsemble::quadratic(centers);
  RunSpec s2 = make_spec(uniform_complete_weights(3), unit_box(2), identity_dynamics(2), StepSchedule::constant(0.3, 10), 10);
  s2.x0 = c;
  const RunTrace t2 = run(s2, q);
  const MinimizerPath p2 = minimizer_path(q, identity_dynamics(2), 10);
  CHECK(std::abs(dynamic_regret(t2, q, p2, unit_box(2), identity_dynamics(2)).dynamic_regret) <= 1e-24);
  CHECK(static_comparator(q, unit_box(2).domain(), 10) == c);
  CHECK(path_variation(p2, identity_dynamics(2), NormKind::l2) == 0.0);
}

TEST_CASE("regret curves are consistent") {
  const auto geom = unit_box(3);
  const LossEnsemble losses = synthetic_suite(3, 6, 3, 30, geom);
  const LinearDynamics a = identity_dynamics(3);
  const RunTrace tr = run(make_spec(metropolis_weights(build_grid_graph(2, 3)), geom, a, StepSchedule::constant(0.1, 30), 30), losses);
  const RegretReport r = dynamic_regret(tr, losses, minimizer_path(losses, a, 30), geom, a);
  CHECK(r.per_step.size() == 30);
  CHECK(r.cumulative.back() == doctest::Approx(r.dynamic_regret));
  for (std::size_t t = 0; t < 30; ++t) {
    CHECK(r.normalized[t] == doctest::Approx(r.cumulative[t] / (t + 1)));
    CHECK(r.per_step[t] >= -1e-9);
  }
}

TEST_CASE("regret is invariant under relabeling agents") {
  const auto geom = unit_box(2);
  const int n = 5, T = 20;
  const LossEnsemble losses = synthetic_suite(6, n, 2, T, geom);
  const WeightMatrix w = metropolis_weights(random_connected_graph(n, 0.5, 7));
  const std::vector<int> perm = {3, 0, 4, 1, 2};
  Mat pw(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pw(i, j) = w(perm[i], perm[j]);
  std::vector<Mat> centers;
  for (int t = 1; t <= T + 1; ++t) {
    Mat c(n, 2);
    for (int i = 0; i < n; ++i) {
      // recover c_{i,t} from the gradient at the origin: grad = -2 c
      c.row(i) = -0.5 * losses.gradient(perm[i], t, Vec::Zero(2)).transpose();
    }
    centers.push_back(c);
  }
  const LossEnsemble permuted = LossEnsemble::quadratic(centers);
  const LinearDynamics a = identity_dynamics(2);
  const MinimizerPath path = minimizer_path(losses, a, T);
  const double r1 = dynamic_regret(run(make_spec(w, geom, a, StepSchedule::constant(0.2, T), T), losses), losses, path, geom, a).dynamic_regret;
  const double r2 =
      dynamic_regret(run(make_spec(WeightMatrix(pw), geom, a, StepSchedule::constant(0.2, T), T), permuted), permuted, path, geom, a).dynamic_regret;
  CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
}

TEST_CASE("static comparators") {
  const auto geom = unit_box(2);
  SyntheticOptions zero;
  zero.kind = LossKind::synthetic_linear;
  zero.zero_coefficients = true;
  const LossEnsemble z = synthetic_suite(1, 3, 2, 10, geom, zero);
  const RunTrace tr = run(make_spec(uniform_complete_weights(3), geom, identity_dynamics(2), StepSchedule::constant(0.1, 10), 10), z);
  CHECK(static_regret(tr, z, geom.domain()) == 0.0);

  SyntheticOptions lin;
  lin.kind = LossKind::synthetic_linear;
  const LossEnsemble l = synthetic_suite(2, 3, 2, 10, geom, lin);
  const Vec c = static_comparator(l, geom.domain(), 10);
  // brute force over the box vertices and a grid
  double best = INFINITY;
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j) {
      const Vec x = (Vec(2) << -1 + 0.05 * i, -1 + 0.05 * j).finished();
      double s = 0;
      for (int t = 1; t <= 10; ++t) s += l.global_value(t, x);
      best = std::min(best, s);
    }
  double at_c = 0;
  for (int t = 1; t <= 10; ++t) at_c += l.global_value(t, c);
  CHECK(at_c <= best + 1e-12);

  const MinimizerPath path = generate_path(ncv_dynamics(0.1), NoiseModel::gaussian_ncv(0.1, 0.5, 3), (Vec(4) << 0, 1, 0, 1).finished(), 30);
  const LossEnsemble tr_ens = LossEnsemble::tracking(path, ObservationModel::grouped(25), GradientConvention::literal);
  const Domain big = Domain::box(Vec::Constant(4, -100.0), Vec::Constant(4, 100.0));
  Vec avg = Vec::Zero(4);
  for (int t = 1; t <= 30; ++t) avg += path.at(t) / 30.0;
  CHECK((static_comparator(tr_ens, big, 30) - avg).norm() < 1e-12);

  const auto simplex = MirrorGeometry::kl(Domain::simplex(3, 0.05));
  const LossEnsemble ls = synthetic_suite(4, 3, 3, 10, simplex, lin);
  const Vec cs = static_comparator(ls, simplex.domain(), 10);
  CHECK(simplex.domain().contains(cs));
}

TEST_CASE("property: per-step comparator is no worse than any grid point") {
  const auto geom = unit_box(2);
  for (auto kind : {LossKind::synthetic_quadratic, LossKind::synthetic_linear}) {
    SyntheticOptions opt;
    opt.kind = kind;
    const LossEnsemble e = synthetic_suite(12, 4, 2, 15, geom, opt);
    const RunTrace tr = run(make_spec(metropolis_weights(build_grid_graph(2, 2)), geom, identity_dynamics(2), StepSchedule::constant(0.1, 15), 15), e);
    std::vector<Vec> best;
    for (int t = 1; t <= 16; ++t) {
      Vec arg;
      double v = INFINITY;
      for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 100; ++j) {
          const Vec x = (Vec(2) << -1 + 0.02 * i, -1 + 0.02 * j).finished();
          if (e.global_value(t, x) < v) {
            v = e.global_value(t, x);
            arg = x;
          }
        }
      best.push_back(arg);
    }
    const LinearDynamics a = identity_dynamics(2);
    const double reported = dynamic_regret(tr, e, minimizer_path(e, a, 15), geom, a).dynamic_regret;
    const double grid = dynamic_regret(tr, e, path_from_states(a, best), geom, a).dynamic_regret;
    CHECK(reported >= grid - 1e-9);
  }
}

TEST_CASE("property: seeded runs satisfy theorem 1 and the lemma 4 per-agent gap") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto geom = seed % 2 ? MirrorGeometry::kl(Domain::simplex(3, 0.02)) : unit_box(3);
    const LossEnsemble e = synthetic_suite(seed, 6, 3, 80, geom);
    const LinearDynamics a = identity_dynamics(3);
    const WeightMatrix w = metropolis_weights(random_connected_graph(6, 0.5, seed + 100));
    const RunTrace tr = run(make_spec(w, geom, a, StepSchedule::constant(0.05, 80), 80), e);
    const MinimizerPath path = minimizer_path(e, a, 80);
    BoundInputs in;
    in.constants = *geometry_constants(geom);
    in.lipschitz = lipschitz_bound(e, geom);
    in.sigma2 = second_singular_value(w).sigma2;
    in.etas = tr.etas;
    for (const auto& v : path.noise) in.noise_norms.push_back(geom.norm(v));
    in.agents = 6;
    in.horizon = 80;
    const BoundReport b = theorem1_bound(in);
    CHECK(dynamic_regret(tr, e, path, geom, a).dynamic_regret <= b.theorem1_total);
    CHECK(local_regret(tr, e, path) <= b.lemma4_rhs);
  }
}
