#include <benchmark/benchmark.h>

#include "fairdiv/opt.hpp"
#include "fairdiv/policies.hpp"
#include "fairdiv/random.hpp"

using namespace fairdiv;

namespace {

void BM_SolveY(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto mu = random_normalized_means(n, n, 0.5 / static_cast<double>(n), 2.0 / static_cast<double>(n), 1);
  const auto cs = proportionality(n, n, 0.5 / static_cast<double>(n), 2.0 / static_cast<double>(n));
  for (auto _ : state) benchmark::DoNotOptimize(solve_Y(mu, cs));
}
BENCHMARK(BM_SolveY)->Arg(2)->Arg(3)->Arg(4)->Arg(6);

void BM_SolveYEnvyFree(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto mu = random_normalized_means(n, n, 0.5 / static_cast<double>(n), 2.0 / static_cast<double>(n), 2);
  const auto cs = envy_freeness(n, n, 0.5 / static_cast<double>(n), 2.0 / static_cast<double>(n));
  for (auto _ : state) benchmark::DoNotOptimize(solve_Y(mu, cs));
}
BENCHMARK(BM_SolveYEnvyFree)->Arg(2)->Arg(3)->Arg(4);

// One post-warm-up round on the 2x2 diagonal instance.
void BM_UcbRound(benchmark::State& state) {
  const std::size_t T = 20000;
  const PublicParams params{2, 2, T, 0.2, 0.8};
  const auto cs = proportionality(2, 2, 0.2, 0.8);
  const ValueMatrix mu{{0.8, 0.2}, {0.2, 0.8}};
  History h(2, 2);
  CounterRng rng(3, Stream::kProperty);
  const auto per_cell = static_cast<std::size_t>(state.range(0));
  std::size_t t = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      for (std::size_t s = 0; s < per_cell; ++s) h.record(t++, k, i, mu(i, k) + 0.1 * rng.normal());
    }
  }
  UcbOptions opts;
  opts.warmup_scale = 1e-6;
  for (auto _ : state) benchmark::DoNotOptimize(ucb_fair_allocate(t, h, params, cs, opts));
}
BENCHMARK(BM_UcbRound)->Arg(4000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
