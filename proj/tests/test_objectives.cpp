#include <doctest.h>

#include <cmath>

#include "dmd/objectives.hpp"

using namespace dmd;

namespace {

MinimizerPath short_target() {
  return generate_path(ncv_dynamics(0.1), NoiseModel::gaussian_ncv(0.1, 0.5, 9), (Vec(4) << 0.0, 1.0, 0.0, 1.0).finished(), 10);
}

MirrorGeometry unit_box(int d) { return MirrorGeometry::euclidean(Domain::box(Vec::Constant(d, -1.0), Vec::Constant(d, 1.0))); }

}  // namespace

TEST_CASE("grouped observation model") {
  const ObservationModel obs = ObservationModel::grouped(25);
  std::vector<int> count(4, 0);
  for (int k : obs.coordinate) ++count[k];
  CHECK(count == std::vector<int>{7, 6, 6, 6});
  CHECK(obs.coordinate[6] == 0);
  CHECK(obs.coordinate[7] == 1);
  CHECK(obs.coordinate[24] == 3);
  CHECK(obs.noise_variance() == doctest::Approx(1.0 / 3));
  CHECK_THROWS(ObservationModel::grouped(3));
}

TEST_CASE("tracking loss values and gradients") {
  const MinimizerPath path = short_target();
  const LossEnsemble ens = LossEnsemble::tracking(path, ObservationModel::grouped(25), GradientConvention::literal);
  const Vec target = path.at(3);
  CHECK(ens.value(0, 3, target) == doctest::Approx(1.0 / 3));
  Vec off = target;
  off(0) += 2.0;
  CHECK(ens.value(0, 3, off) == doctest::Approx(4.0 + 1.0 / 3));
  CHECK(ens.gradient(0, 3, target).isZero());
  off(0) = target(0) + 1.0;
  const Vec g = ens.gradient(0, 3, off);
  CHECK(g(0) == doctest::Approx(2.0));
  CHECK(g.tail(3).isZero());

  ObservationModel quiet = ObservationModel::grouped(25, 4, 0.0);
  const LossEnsemble q = LossEnsemble::tracking(path, quiet, GradientConvention::literal);
  CHECK(q.value(5, 2, path.at(2)) == 0.0);
  Rng rng(1);
  CHECK(q.stochastic_gradient(5, 2, path.at(2), rng).isZero());
  CHECK(q.global_value(2, path.at(2)) == 0.0);
  CHECK_THROWS_AS(ens.value(25, 1, target), std::out_of_range);
  CHECK_THROWS_AS(ens.value(0, 0, target), std::out_of_range);
}

TEST_CASE("stochastic tracking oracle: reproducible draws and convention scale") {
  const MinimizerPath path = short_target();
  const LossEnsemble lit = LossEnsemble::tracking(path, ObservationModel::grouped(25), GradientConvention::literal);
  const LossEnsemble ex = LossEnsemble::tracking(path, ObservationModel::grouped(25), GradientConvention::exact);
  CHECK(lit.stochastic_scale() == 0.5);
  CHECK(ex.stochastic_scale() == 1.0);
  const Vec x = Vec::Constant(4, 0.3);
  Rng a(5), b(5), c(5);
  const Vec ga = lit.stochastic_gradient(9, 4, x, a);
  CHECK(ga == lit.stochastic_gradient(9, 4, x, b));
  CHECK(ex.stochastic_gradient(9, 4, x, c) == 2.0 * ga);
}

TEST_CASE("property: monte carlo oracle mean matches the declared expectation") {
  const MinimizerPath path = short_target();
  for (auto conv : {GradientConvention::literal, GradientConvention::exact}) {
    const LossEnsemble ens = LossEnsemble::tracking(path, ObservationModel::grouped(25), conv);
    Rng rng(17);
    const Vec x = (Vec(4) << 1.5, 0.2, -0.7, 2.0).finished();
    for (int i : {3, 10, 22}) {
      const int draws = 100000;
      Vec sum = Vec::Zero(4), sq = Vec::Zero(4);
      for (int k = 0; k < draws; ++k) {
        const Vec g = ens.stochastic_gradient(i, 5, x, rng);
        sum += g;
        sq += g.cwiseProduct(g);
      }
      const Vec mean = sum / draws;
      const Vec expected = ens.stochastic_scale() * ens.gradient(i, 5, x);
      for (int k = 0; k < 4; ++k) {
        const double se = std::sqrt((sq(k) / draws - mean(k) * mean(k)) / draws);
        CHECK(std::abs(mean(k) - expected(k)) <= 3.0 * se + 1e-15);
      }
    }
  }
}

TEST_CASE("property: exact gradients match central finite differences") {
  Rng rng(23);
  const auto box = unit_box(3);
  const auto simplex = MirrorGeometry::kl(Domain::simplex(3, 0.02));
  const MinimizerPath path = short_target();
  const LossEnsemble track = LossEnsemble::tracking(path, ObservationModel::grouped(25), GradientConvention::literal);
  SyntheticOptions lin;
  lin.kind = LossKind::synthetic_linear;
  const std::vector<LossEnsemble> suites = {synthetic_suite(1, 5, 3, 10, box), synthetic_suite(2, 5, 3, 10, simplex),
                                            synthetic_suite(3, 5, 3, 10, box, lin)};
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  auto fd_check = [&](const LossEnsemble& e, int i, int t, const Vec& x) {
    const double h = 1e-5;
    const Vec g = e.gradient(i, t, x);
    for (int k = 0; k < x.size(); ++k) {
      Vec xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      const double fd = (e.value(i, t, xp) - e.value(i, t, xm)) / (2 * h);
      CHECK(std::abs(fd - g(k)) <= 1e-6 * std::max(1.0, std::abs(g(k))));
    }
    ++checked;
  };
  for (int s = 0; s < 25; ++s) {
    for (const auto& e : suites) {
      const int i = static_cast<int>(rng() % 5), t = 1 + static_cast<int>(rng() % 10);
      Vec x(3);
      for (int k = 0; k < 3; ++k) x(k) = u(rng);
      fd_check(e, i, t, x);
    }
    Vec x(4);
    for (int k = 0; k < 4; ++k) x(k) = 3 * u(rng);
    fd_check(track, static_cast<int>(rng() % 25), 1 + static_cast<int>(rng() % 10), x);
  }
  CHECK(checked == 100);
}

TEST_CASE("global tracking loss is minimized at the target") {
  const MinimizerPath path = short_target();
  const LossEnsemble ens = LossEnsemble::tracking(path, ObservationModel::grouped(25), GradientConvention::literal);
  for (int t = 1; t <= 11; ++t) {
    Vec g = Vec::Zero(4);
    for (int i = 0; i < 25; ++i) g += ens.gradient(i, t, path.at(t));
    CHECK(g.isZero());
    CHECK(ens.global_minimizer(t) == path.at(t));
  }
}

TEST_CASE("synthetic suites") {
  const auto box = unit_box(2);
  SyntheticOptions still;
  still.spread = 0.0;
  still.drift = 0.0;
  const LossEnsemble q = synthetic_suite(4, 3, 2, 20, box, still);
  CHECK(q.horizon() == 21);
  for (int t = 2; t <= 21; ++t) CHECK(q.global_minimizer(t) == q.global_minimizer(1));

  SyntheticOptions zero;
  zero.kind = LossKind::synthetic_linear;
  zero.zero_coefficients = true;
  const LossEnsemble z = synthetic_suite(4, 3, 2, 5, box, zero);
  CHECK(z.global_value(3, Vec::Constant(2, 0.4)) == 0.0);

  CHECK(lipschitz_bound(q, box) == doctest::Approx(2.0 * 2.0 * std::sqrt(2.0)));
  CHECK(lipschitz_bound(z, box) == 1.0);
  const MinimizerPath path = short_target();
  const LossEnsemble tr = LossEnsemble::tracking(path, ObservationModel::grouped(25), GradientConvention::literal);
  const auto tbox = MirrorGeometry::euclidean(Domain::box(Vec::Constant(4, -1000.0), Vec::Constant(4, 1000.0)));
  CHECK(lipschitz_bound(tr, tbox) == 4000.0);
  CHECK_THROWS(lipschitz_bound(q, MirrorGeometry::euclidean(Domain::unconstrained(2))));
}

TEST_CASE("property: stochastic gradient norms respect the declared bound") {
  Rng rng(31);
  const auto box = unit_box(3);
  const auto simplex = MirrorGeometry::kl(Domain::simplex(3, 0.02));
  SyntheticOptions noisy;
  noisy.gradient_noise = 0.3;
  SyntheticOptions noisy_lin = noisy;
  noisy_lin.kind = LossKind::synthetic_linear;
  for (const auto* geom : {&box, &simplex}) {
    for (const auto& opt : {noisy, noisy_lin}) {
      const LossEnsemble e = synthetic_suite(8, 4, 3, 20, *geom, opt);
      const double g = std::sqrt(second_moment_bound(e, *geom));
      for (int k = 0; k < 2000; ++k) {
        const Vec x = sample_point(geom->domain(), rng);
        const Vec s = e.stochastic_gradient(k % 4, 1 + k % 20, x, rng);
        CHECK(geom->dual_norm(s) <= g + 1e-12);
        CHECK(geom->dual_norm(e.gradient(k % 4, 1 + k % 20, x)) <= lipschitz_bound(e, *geom) + 1e-12);
      }
    }
  }
  const MinimizerPath path = short_target();
  const auto tbox = MirrorGeometry::euclidean(Domain::box(Vec::Constant(4, -50.0), Vec::Constant(4, 50.0)));
  const LossEnsemble tr = LossEnsemble::tracking(path, ObservationModel::grouped(25), GradientConvention::exact);
  const double g = std::sqrt(second_moment_bound(tr, tbox));
  for (int k = 0; k < 2000; ++k) {
    const Vec x = sample_point(tbox.domain(), rng);
    CHECK(tr.stochastic_gradient(k % 25, 1 + k % 10, x, rng).norm() <= g);
  }
}
