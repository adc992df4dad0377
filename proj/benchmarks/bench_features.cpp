#include <benchmark/benchmark.h>

#include "phoneboost/dsp.hpp"
#include "phoneboost/haar.hpp"
#include "phoneboost/hog.hpp"
#include "phoneboost/random.hpp"

namespace pb = phoneboost;

namespace {

pb::Spectrogram random_image(std::size_t bands, std::size_t columns, std::uint64_t seed) {
  pb::Rng rng(seed);
  pb::Spectrogram s(bands, columns, pb::SpectrogramStage::normalized);
  for (double& v : s.values()) v = rng.uniform();
  return s;
}

void BM_StftPower(benchmark::State& state) {
  pb::Rng rng(1);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (double& v : x) v = rng.uniform(-1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(pb::dsp::stft_power(x, {128, 64}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StftPower)->Arg(1600)->Arg(16000);

void BM_IntegralImage(benchmark::State& state) {
  const auto s = random_image(14, 15, 2);
  for (auto _ : state) benchmark::DoNotOptimize(pb::haar::integral(s));
}
BENCHMARK(BM_IntegralImage);

void BM_HaarBank(benchmark::State& state) {
  const auto s = random_image(14, 15, 3);
  const auto img = pb::haar::integral(s);
  const auto bank = pb::haar::enumerate_haar(14, 15, pb::haar::all_scales(14, 15));
  for (auto _ : state) {
    double acc = 0.0;
    for (const auto& f : bank) acc += pb::haar::eval_haar_unchecked(f, img);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(bank.size()));
}
BENCHMARK(BM_HaarBank);

void BM_HogHistogram(benchmark::State& state) {
  const auto s = random_image(14, 15, 4);
  const auto patches = pb::hog::enumerate_hog(14, 15);
  for (auto _ : state) {
    for (const auto& p : patches) benchmark::DoNotOptimize(pb::hog::hog_histogram(s, p));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(patches.size()));
}
BENCHMARK(BM_HogHistogram);

}  // namespace
