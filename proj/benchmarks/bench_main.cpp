#include <benchmark/benchmark.h>

#include "pvortex/pvortex.hpp"

using namespace pvortex;

namespace {

const VortexConfig kHalf = VortexConfig::create(0.5, 0.5);

}  // namespace

static void BM_WField(benchmark::State& state) {
  const DomainModel disk = DomainModel::unit_disk();
  const WState w{{0.05, 0.01}, {0.5, 0.1}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(w_field(disk, kHalf, w));
  }
}
BENCHMARK(BM_WField);

static void BM_RemainderQ(benchmark::State& state) {
  const DomainModel disk = DomainModel::unit_disk();
  const WState w{{0.01, 0.0}, {0.5, 0.1}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(remainder_Q(disk, kHalf, w));
  }
}
BENCHMARK(BM_RemainderQ);

// Fixed window at shrinking separation; steps grow like 1/|w1|^2.
static void BM_IntegratePeriod(benchmark::State& state) {
  const DomainModel disk = DomainModel::unit_disk();
  const System<4> sys = w_system(disk, kHalf);
  const double r1 = 1.0 / static_cast<double>(state.range(0));
  const WVec w0 = pack(WState{{r1, 0.0}, {0.5, 0.0}});
  IntegratorSettings s;
  s.store_dense = false;
  std::size_t steps = 0;
  for (auto _ : state) {
    const Trajectory<4> traj = integrate(sys, w0, 0.0, 10.0, s);
    steps = traj.times.size();
    benchmark::DoNotOptimize(traj.final_state());
  }
  state.counters["steps"] = static_cast<double>(steps);
}
BENCHMARK(BM_IntegratePeriod)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_TraceLevel(benchmark::State& state) {
  const DomainModel disk = DomainModel::unit_disk();
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_level(disk, kHalf, 0.1).period);
  }
}
BENCHMARK(BM_TraceLevel)->Unit(benchmark::kMillisecond);

static void BM_Rot1(benchmark::State& state) {
  const DomainModel disk = DomainModel::unit_disk();
  const LevelOrbit level = trace_level(disk, kHalf, 0.1);
  const WState w{{0.05, 0.0}, level.samples.front()};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rot1(disk, kHalf, w, level.period));
  }
}
BENCHMARK(BM_Rot1)->Unit(benchmark::kMillisecond);

static void BM_RefineOrbit(benchmark::State& state) {
  const DomainModel disk = DomainModel::unit_disk();
  const LevelOrbit level = trace_level(disk, kHalf, 0.1);
  TwistCertificate cert;
  cert.c = 0.1;
  cert.period = level.period;
  cert.b1 = 0.1;
  cert.sigma = 1;
  const int nu = static_cast<int>(state.range(0));
  const WState seed = lock_seed_index(disk, kHalf, seed_orbit(disk, kHalf, cert, level, nu),
                                      level.period, nu);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        refine_orbit(disk, kHalf, seed, level.period, level.star_center).residual);
  }
}
BENCHMARK(BM_RefineOrbit)->Arg(15)->Arg(45)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
