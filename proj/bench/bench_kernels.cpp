// Serial reference vs OpenMP-parallel kernels.

#include <benchmark/benchmark.h>

#include "bfpp/estimator.hpp"
#include "bfpp/percolation.hpp"
#include "bfpp/sampler.hpp"

using namespace bfpp;

namespace {

ModelParams model(double lambda) {
  ModelParams p;
  p.lambda = lambda;
  return p;
}

EstimatorOptions with(Execution e) {
  EstimatorOptions o;
  o.execution = e;
  o.directions = 0;
  return o;
}

void BM_MuSerial(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_mu(model(0.3), {r}, 32, 1, with(Execution::serial)));
}

void BM_MuParallel(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_mu(model(0.3), {r}, 32, 1, with(Execution::parallel)));
}

void BM_CrossingSerial(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_crossing(model(0.3), {r}, 32, 1, {3}, with(Execution::serial)));
  }
}

void BM_CrossingParallel(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_crossing(model(0.3), {r}, 32, 1, {3}, with(Execution::parallel)));
  }
}

BallSample sample_of_radius(double r) {
  RandomStream rng(7);
  return sample_hitting(model(0.3), {0, 0}, r, rng);
}

void BM_ComponentsGrid(benchmark::State& state) {
  auto s = sample_of_radius(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(connected_components(s.balls));
  state.counters["balls"] = static_cast<double>(s.balls.size());
}

void BM_ComponentsReference(benchmark::State& state) {
  auto s = sample_of_radius(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(connected_components_reference(s.balls));
  state.counters["balls"] = static_cast<double>(s.balls.size());
}

}  // namespace

BENCHMARK(BM_MuSerial)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MuParallel)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossingSerial)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossingParallel)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ComponentsGrid)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ComponentsReference)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
