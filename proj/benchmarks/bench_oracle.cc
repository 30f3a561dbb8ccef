#include <benchmark/benchmark.h>

#include "rdv/oracle.h"

namespace {

using namespace rdv;

// Harmonic weights are all distinct, so nothing lumps: 2^N states.
void BM_MarkovExactDistinct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto env = Environment::homogeneous(n, 0.5, 0.5, RendezvousProfile(0.001, 1.0));
  const auto policy = build_policy(PolicySpec::simple(PolicyKind::kHarmonic), n);
  for (auto _ : state) benchmark::DoNotOptimize(ettr_markov_exact(policy, env).value);
}
BENCHMARK(BM_MarkovExactDistinct)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

// Uniform over N identical channels lumps to N + 1 states.
void BM_MarkovExactLumped(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto env = Environment::homogeneous(n, 0.5, 0.5, RendezvousProfile(0.001, 1.0));
  const auto policy = build_policy(PolicySpec::simple(PolicyKind::kUniform), n);
  for (auto _ : state) benchmark::DoNotOptimize(ettr_markov_exact(policy, env).value);
}
BENCHMARK(BM_MarkovExactLumped)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_FrozenDistinct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto env = Environment::homogeneous(n, 0.5, 0.5, RendezvousProfile(0.001, 1.0));
  const auto policy = build_policy(PolicySpec::simple(PolicyKind::kHarmonic), n);
  for (auto _ : state) benchmark::DoNotOptimize(ettr_frozen(policy, env).value);
}
BENCHMARK(BM_FrozenDistinct)->Arg(10)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
