#include <benchmark/benchmark.h>

#include "ddr/chain.hpp"
#include "ddr/horseshoe.hpp"
#include "ddr/mlr.hpp"
#include "ddr/sim.hpp"

using namespace ddr;

namespace {

// One likelihood and gradient evaluation over N pairs of 100 atoms.
void BM_ObjectiveEvaluate(benchmark::State& state) {
  ScenarioConfig sc;
  sc.n = static_cast<std::size_t>(state.range(0));
  sc.n_test = 1;
  sc.seed = 1;
  const auto data = gen_scenario(sc).train;
  SlicedObjective objective(data, sample_projections(200, 2, 5), 10.0);
  LinearMapParams map = default_truth();
  map.A(0, 1) = 0.1;
  objective.evaluate(map);  // first call sorts from scratch
  for (auto _ : state) benchmark::DoNotOptimize(objective.evaluate(map).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ObjectiveEvaluate)->Arg(10)->Arg(50)->Arg(200)->Complexity(benchmark::oN);

void BM_HorseshoeSweep(benchmark::State& state) {
  Rng rng(6);
  const Eigen::Index d = state.range(0);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(d, d, 0.5);
  HorseshoeState hs = HorseshoeState::ones(d, d);
  for (auto _ : state) hs = horseshoe_gibbs_sweep(a, hs, rng);
}
BENCHMARK(BM_HorseshoeSweep)->Arg(2)->Arg(8)->Arg(32);

void BM_DdrChain(benchmark::State& state) {
  ScenarioConfig sc;
  sc.n = 10;
  sc.n_test = 1;
  sc.seed = 2;
  const auto data = gen_scenario(sc).train;
  MalaConfig cfg;
  cfg.w = 10.0;
  cfg.eta = 1e-5;
  cfg.projections = 50;
  cfg.n_iter = 200;
  cfg.burn_in = 100;
  for (auto _ : state) benchmark::DoNotOptimize(run_ddr_chain(data, cfg).draws.size());
}
BENCHMARK(BM_DdrChain)->Unit(benchmark::kMillisecond);

void BM_MlrChain(benchmark::State& state) {
  ScenarioConfig sc;
  sc.n = 50;
  sc.n_test = 1;
  sc.seed = 3;
  const auto bulk = pseudo_bulk(gen_scenario(sc).train);
  for (auto _ : state) benchmark::DoNotOptimize(run_mlr_chain(bulk.xbar, bulk.ybar, 1000, 500, 7).size());
}
BENCHMARK(BM_MlrChain)->Unit(benchmark::kMillisecond);

}  // namespace
