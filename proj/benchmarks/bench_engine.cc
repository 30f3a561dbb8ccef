#include <benchmark/benchmark.h>

#include "rdv/engine.h"

namespace {

using namespace rdv;

const RendezvousProfile kProfile(0.001, 1.0);

void BM_FixedTrial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto env = Environment::homogeneous(n, 0.5, 0.5, kProfile);
  const auto policy = build_policy(PolicySpec::simple(PolicyKind::kUniform), n);
  Rng rng(1);
  std::uint64_t slots = 0;
  for (auto _ : state) {
    const auto ttr = run_fixed_trial(policy, env, kDefaultMaxSlots, rng);
    slots += ttr.value_or(kDefaultMaxSlots);
    benchmark::DoNotOptimize(ttr);
  }
  state.counters["slots/s"] =
      benchmark::Counter(static_cast<double>(slots), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_FixedTrial)->Arg(2)->Arg(16)->Arg(128);

void BM_LearningEpisode(benchmark::State& state) {
  const auto env = Environment::homogeneous(16, 0.5, 0.5, kProfile);
  TrialConfig config;
  config.horizon = static_cast<std::uint64_t>(state.range(0));
  config.checkpoints = {config.horizon};
  Rng rng(2);
  for (auto _ : state) {
    auto trace = run_learning_episode(kDefaultGamma, env, config, rng);
    benchmark::DoNotOptimize(trace.successes);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LearningEpisode)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Exp3SelectUpdate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Exp3Learner learner(kDefaultGamma, n);
  Rng rng(3);
  for (auto _ : state) {
    const std::size_t pick = learner.select(rng);
    learner.update({pick, pick == 0 ? 1 : 0});
    learner.renormalize();
  }
}
BENCHMARK(BM_Exp3SelectUpdate)->Arg(16)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
