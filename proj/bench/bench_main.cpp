// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "manoma/benchmarks.hpp"
#include "manoma/config.hpp"
#include "manoma/experiment.hpp"
#include "manoma/ho.hpp"

using namespace manoma;

namespace {

const ScenarioConfig& desk() {
  static const ScenarioConfig cfg = profile_config("desk");
  return cfg;
}

const Scenario& desk_scenario() {
  static const Scenario sc = scenario_for_seed(desk(), 1);
  return sc;
}

// One batch the size of a desk population, scored with the real fitness.
std::vector<EvalTask> batch() {
  const Scenario& sc = desk_scenario();
  RngStream rng(5);
  std::vector<EvalTask> tasks(static_cast<std::size_t>(desk().n_hippos));
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    tasks[i].position = rng.uniform_vector(3 * sc.num_users(), -sc.region_half, sc.region_half);
    tasks[i].key = {1, i, 0};
  }
  return tasks;
}

FitnessFn ao_fitness() {
  return [](const Eigen::VectorXd& x, const FitnessKey& key) {
    const Scenario& sc = desk_scenario();
    return fitness(sc, Apv::from_stacked(x, sc.region_half), desk().ao_params(), 1, key);
  };
}

void BM_evaluate_serial(benchmark::State& state) {
  const FitnessFn fn = ao_fitness();
  for (auto _ : state) {
    auto tasks = batch();
    evaluate_serial(tasks, fn);
    benchmark::DoNotOptimize(tasks.front().value);
  }
}

void BM_evaluate_parallel(benchmark::State& state) {
  const FitnessFn fn = ao_fitness();
  for (auto _ : state) {
    auto tasks = batch();
    evaluate_parallel(tasks, fn);
    benchmark::DoNotOptimize(tasks.front().value);
  }
}

void BM_mcp_serial(benchmark::State& state) {
  const Scenario& sc = desk_scenario();
  const double step = sc.wavelength() / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mcp_positions_serial(sc, step).positions.sum());
}

void BM_mcp_parallel(benchmark::State& state) {
  const Scenario& sc = desk_scenario();
  const double step = sc.wavelength() / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mcp_positions(sc, step).positions.sum());
}

}  // namespace

BENCHMARK(BM_evaluate_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_evaluate_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_mcp_serial)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_mcp_parallel)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
