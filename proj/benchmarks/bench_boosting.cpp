#include <benchmark/benchmark.h>

#include "phoneboost/boosting.hpp"
#include "phoneboost/random.hpp"

namespace pb = phoneboost;
namespace bst = phoneboost::boosting;

namespace {

bst::SampleMatrix dataset(std::size_t samples, std::size_t features) {
  pb::Rng rng(7);
  bst::SampleMatrix m(samples, features);
  for (std::size_t i = 0; i < samples; ++i) {
    m.labels()[i] = rng.uniform() < 0.5 ? -1 : 1;
    for (std::size_t f = 0; f < features; ++f) m.set(i, f, rng.normal() + (f % 5 == 0 ? 0.3 * m.labels()[i] : 0.0));
  }
  return m;
}

void BM_StumpDiscrete(benchmark::State& state) {
  const auto m = dataset(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(bst::fit_stump_discrete(m, 0));
}
BENCHMARK(BM_StumpDiscrete)->Arg(400)->Arg(4000);

void BM_StumpGentle(benchmark::State& state) {
  const auto m = dataset(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(bst::fit_stump_gentle(m, 0));
}
BENCHMARK(BM_StumpGentle)->Arg(400)->Arg(4000);

void BM_GentleRounds(benchmark::State& state) {
  const auto m = dataset(400, 2000);
  for (auto _ : state) benchmark::DoNotOptimize(bst::train_gentle(m, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_GentleRounds)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
