#include <vector>

#include <benchmark/benchmark.h>

#include "ddr/model.hpp"
#include "ddr/ot.hpp"
#include "ddr/random.hpp"

using namespace ddr;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index m, Eigen::Index d, Rng& rng) {
  Eigen::MatrixXd x(m, d);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  return x;
}

void BM_Wasserstein1d(benchmark::State& state) {
  Rng rng(1);
  const auto m = static_cast<std::size_t>(state.range(0));
  std::vector<double> xs(m), ys(m + m / 3);
  for (auto& v : xs) v = rng.normal();
  for (auto& v : ys) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein1d_pp(xs, ys, 2));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Wasserstein1d)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oNLogN);

void BM_LinearProgram(benchmark::State& state) {
  Rng rng(2);
  const EmpiricalDistribution f(gaussian(state.range(0), 2, rng));
  const EmpiricalDistribution g(gaussian(state.range(0), 2, rng));
  for (auto _ : state) benchmark::DoNotOptimize(lp_wasserstein_pp(f, g, 2).cost);
}
BENCHMARK(BM_LinearProgram)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_SlicedWasserstein(benchmark::State& state) {
  Rng rng(3);
  const EmpiricalDistribution f(gaussian(100, 5, rng));
  const EmpiricalDistribution g(gaussian(100, 5, rng));
  const auto proj = sample_projections(state.range(0), 5, 4);
  for (auto _ : state) benchmark::DoNotOptimize(sliced_wasserstein_pp(f, g, proj, 2));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SlicedWasserstein)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oN);

}  // namespace
