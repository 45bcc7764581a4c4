#include <benchmark/benchmark.h>

#include "skiptrack/random.hpp"
#include "skiptrack/wasp.hpp"

using namespace skiptrack;

namespace {

void BM_WaspMarginal(benchmark::State& st) {
  const auto k = static_cast<std::size_t>(st.range(0));
  Rng rng(3);
  std::vector<std::vector<double>> draws(k, std::vector<double>(10000));
  for (auto& d : draws)
    for (double& x : d) x = rng.standard_normal();
  for (auto _ : st) benchmark::DoNotOptimize(wasp_marginal(draws, kDefaultWaspDraws));
}
BENCHMARK(BM_WaspMarginal)->Arg(4)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
