// Serial reference vs OpenMP kernels. Arg(0) is the agent count.
#include <benchmark/benchmark.h>

#include "dmd/config.hpp"
#include "dmd/engine.hpp"
#include "dmd/harness.hpp"
#include "dmd/kernels.hpp"
#include "dmd/network.hpp"

using namespace dmd;

namespace {

constexpr int kDim = 16;

struct Fixture {
  WeightMatrix w;
  MirrorGeometry geom;
  Mat x, g;

  Fixture(int n, bool kl)
      : w(metropolis_weights(random_connected_graph(n, 8.0 / n, 1))),
        geom(kl ? MirrorGeometry::kl(Domain::simplex(kDim, 1e-4))
                : MirrorGeometry::euclidean(Domain::box(Vec::Constant(kDim, -1.0), Vec::Constant(kDim, 1.0)))),
        x(n, kDim),
        g(Mat::Random(n, kDim)) {
    Rng rng(2);
    for (int i = 0; i < n; ++i) x.row(i) = sample_point(geom.domain(), rng).transpose();
  }
};

template <bool Parallel>
void BM_mix(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)), false);
  Mat out;
  for (auto _ : state) {
    if (Parallel)
      kernels::mix_parallel(f.w.matrix(), f.x, out);
    else
      kernels::mix_serial(f.w.matrix(), f.x, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_prox_kl(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)), true);
  Mat out;
  for (auto _ : state) {
    if (Parallel)
      kernels::prox_rows_parallel(f.geom, f.g, f.x, 0.1, out);
    else
      kernels::prox_rows_serial(f.geom, f.g, f.x, 0.1, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <Exec E>
void BM_step(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)), true);
  const LinearDynamics a = identity_dynamics(kDim);
  AgentStates s = init_state(f.x.rows(), f.geom);
  for (auto _ : state) {
    s = step(s, f.w, f.geom, a, f.g, 0.05, E);
    benchmark::DoNotOptimize(s.x.data());
  }
}

template <Exec E>
void BM_run(benchmark::State& state) {
  ExperimentConfig c = parse_config("[experiment]\nhorizon = 200\n");
  c = with_value(c, "experiment.exec", E == Exec::parallel ? "parallel" : "serial", false);
  for (auto _ : state) benchmark::DoNotOptimize(run_replicate(c, 1, 0).regret.dynamic_regret);
}

}  // namespace

BENCHMARK_TEMPLATE(BM_mix, false)->Arg(64)->Arg(512)->Arg(2048);
BENCHMARK_TEMPLATE(BM_mix, true)->Arg(64)->Arg(512)->Arg(2048);
BENCHMARK_TEMPLATE(BM_prox_kl, false)->Arg(64)->Arg(512)->Arg(2048);
BENCHMARK_TEMPLATE(BM_prox_kl, true)->Arg(64)->Arg(512)->Arg(2048);
BENCHMARK_TEMPLATE(BM_step, Exec::serial)->Arg(64)->Arg(512);
BENCHMARK_TEMPLATE(BM_step, Exec::parallel)->Arg(64)->Arg(512);
BENCHMARK_TEMPLATE(BM_run, Exec::serial);
BENCHMARK_TEMPLATE(BM_run, Exec::parallel);

BENCHMARK_MAIN();
