#include <benchmark/benchmark.h>

#include <random>

#include "rcpomdp/bounds.hpp"
#include "rcpomdp/envs.hpp"
#include "rcpomdp/point_based.hpp"
#include "rcpomdp/policy.hpp"
#include "rcpomdp/sim.hpp"

using namespace rcpomdp;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

const Model& crs() {
  static const Model m = make_crs(4, 4);
  return m;
}

std::vector<Belief> random_beliefs(const Model& m, std::size_t n) {
  std::mt19937_64 rng(kDefaultSeed);
  std::exponential_distribution<double> e(1.0);
  std::vector<Belief> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p(m.num_states());
    for (double& x : p) x = e(rng);
    out.push_back(Belief::normalized(std::move(p)));
  }
  return out;
}

void BM_Fib(benchmark::State& state) {
  IterationOptions o;
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(fib_bound(crs(), Objective::reward, o));
}

void BM_BackupBeliefs(benchmark::State& state) {
  const auto& m = crs();
  static const AlphaPairSet set = solve_min_cost_policy(m, 0.5);
  static const std::vector<Belief> beliefs = random_beliefs(m, 256);
  for (auto _ : state) benchmark::DoNotOptimize(backup_beliefs(m, set, beliefs, {1.0, 0.0}, exec_of(state)));
}

void BM_Evaluate(benchmark::State& state) {
  const auto& m = crs();
  static const auto set = std::make_shared<const AlphaPairSet>(solve_min_cost_policy(m, 0.5));
  auto policy = make_min_cost_policy(set);
  EvalOptions o;
  o.trials = 2000;
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(m, *policy, o));
}

}  // namespace

BENCHMARK(BM_Fib)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BackupBeliefs)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
