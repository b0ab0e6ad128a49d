#include <doctest.h>

#include <omp.h>

#include "dmd/engine.hpp"
#include "dmd/kernels.hpp"
#include "dmd/network.hpp"

using namespace dmd;

namespace {

// Bitwise equality, not approximate: both paths must do the same arithmetic in the same order.
bool identical(const Mat& a, const Mat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && std::equal(a.data(), a.data() + a.size(), b.data());
}

struct ThreadGuard {
  int saved = omp_get_max_threads();
  explicit ThreadGuard(int n) { omp_set_num_threads(n); }
  ~ThreadGuard() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
  ThreadGuard threads(4);
  const WeightMatrix w = metropolis_weights(random_connected_graph(37, 0.2, 1));
  Rng rng(2);
  const auto box = MirrorGeometry::euclidean(Domain::box(Vec::Constant(6, -1.0), Vec::Constant(6, 1.0)));
  const auto kl = MirrorGeometry::kl(Domain::simplex(6, 0.01));
  for (const auto* geom : {&box, &kl}) {
    Mat x(37, 6), g = Mat::Random(37, 6) * 3.0;
    for (int i = 0; i < 37; ++i) x.row(i) = sample_point(geom->domain(), rng).transpose();
    Mat ys, yp, ps, pp, ds, dp;
    kernels::mix_serial(w.matrix(), x, ys);
    kernels::mix_parallel(w.matrix(), x, yp);
    CHECK(identical(ys, yp));
    kernels::prox_rows_serial(*geom, g, ys, 0.3, ps);
    kernels::prox_rows_parallel(*geom, g, ys, 0.3, pp);
    CHECK(identical(ps, pp));
    const Mat a = 0.9 * Mat::Identity(6, 6);
    kernels::dynamics_rows_serial(*geom, a, ps, ds);
    kernels::dynamics_rows_parallel(*geom, a, ps, dp);
    CHECK(identical(ds, dp));
    for (int i = 0; i < 37; ++i) CHECK(geom->domain().contains(ds.row(i).transpose()));
  }
}

TEST_CASE("mix kernel agrees with a dense product") {
  const WeightMatrix w = metropolis_weights(build_grid_graph(4, 4));
  const Mat x = Mat::Random(16, 3);
  Mat y;
  kernels::mix_serial(w.matrix(), x, y);
  CHECK(((w.matrix() * x) - y).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("row mean") {
  Mat x(3, 2);
  x << 1, 2, 3, 4, 5, 9;
  const Vec m = kernels::row_mean(x);
  CHECK(m(0) == 3.0);
  CHECK(m(1) == 5.0);
}

TEST_CASE("parallel kernels propagate exceptions") {
  ThreadGuard threads(3);
  const auto box = MirrorGeometry::euclidean(Domain::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)));
  Mat y = Mat::Zero(8, 2);
  y(5, 0) = 7.0;  // outside the box
  Mat out;
  CHECK_THROWS(kernels::prox_rows_parallel(box, Mat::Ones(8, 2), y, 0.1, out));
}

TEST_CASE("serial and parallel runs give identical traces") {
  ThreadGuard threads(4);
  const auto geom = MirrorGeometry::kl(Domain::simplex(4, 0.01));
  SyntheticOptions opt;
  opt.gradient_noise = 0.2;
  const LossEnsemble losses = synthetic_suite(3, 12, 4, 40, geom, opt);
  RunSpec spec{metropolis_weights(random_connected_graph(12, 0.3, 4)), geom, identity_dynamics(4), StepSchedule::inv_sqrt(0.5, 40),
               GradientMode::stochastic, 40, 99, std::nullopt, Exec::serial, ""};
  const RunTrace a = run(spec, losses);
  spec.exec = Exec::parallel;
  const RunTrace b = run(spec, losses);
  REQUIRE(a.iterates.size() == b.iterates.size());
  for (std::size_t t = 0; t < a.iterates.size(); ++t) CHECK(identical(a.iterates[t], b.iterates[t]));
  for (std::size_t t = 0; t < a.gradients.size(); ++t) CHECK(identical(a.gradients[t], b.gradients[t]));
}
