#include <benchmark/benchmark.h>

#include "skiptrack/li.hpp"
#include "skiptrack/model.hpp"
#include "skiptrack/sampler.hpp"
#include "skiptrack/simulate.hpp"

using namespace skiptrack;

namespace {

SimulatedData cohort(std::size_t n) { return simulate_replicate(Scenario::SkipTrack, n, 0, 17); }

void BM_Sweep(benchmark::State& st) {
  const auto sim = cohort(static_cast<std::size_t>(st.range(0)));
  const Hyperparams hyper;
  ModelState state = initial_state(sim.data, hyper);
  const auto mask = resolve_fixed_c(hyper, sim.data);
  MhTuning tuning = MhTuning::from(hyper);
  Rng rng(1);
  for (auto _ : st) sweep(state, sim.data, hyper, mask, tuning, rng);
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(sim.data.num_cycles()));
}
BENCHMARK(BM_Sweep)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_LogJoint(benchmark::State& st) {
  const auto sim = cohort(1000);
  const Hyperparams hyper;
  const ModelState state = initial_state(sim.data, hyper);
  for (auto _ : st) benchmark::DoNotOptimize(log_joint(state, sim.data, hyper));
}
BENCHMARK(BM_LogJoint)->Unit(benchmark::kMicrosecond);

void BM_SkipConditional(benchmark::State& st) {
  const auto sim = cohort(100);
  const Hyperparams hyper;
  const ModelState state = initial_state(sim.data, hyper);
  std::size_t k = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(c_conditional(state, sim.data, hyper, k));
    k = (k + 1) % sim.data.num_cycles();
  }
}
BENCHMARK(BM_SkipConditional);

void BM_ComparatorChain(benchmark::State& st) {
  const auto sim = cohort(500);
  const auto spec = li_fit_hyperparams(sim.data);
  ChainConfig cfg;
  cfg.n_chains = 1;
  cfg.n_iter = 200;
  cfg.burn_in = 50;
  cfg.threads = 1;
  for (auto _ : st) benchmark::DoNotOptimize(li_sample_c(sim.data, spec, cfg));
}
BENCHMARK(BM_ComparatorChain)->Unit(benchmark::kMillisecond);

}  // namespace
