#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "phoneboost/error.hpp"
#include "phoneboost/hog.hpp"
#include "phoneboost/svm.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace pb = phoneboost;
using pb::testing::direct_haar;
using pb::testing::naive_histogram;
using pb::testing::direct_power;
using pb::testing::random_signal;
namespace hog = phoneboost::hog;
using hog::HogPatch;

namespace {

std::size_t count_oracle(std::size_t bands, std::size_t columns) {
  std::size_t total = 0;
  for (std::size_t t = 2; t < 64; t += 2) {
    for (auto [w, h] : {std::pair{t, t}, {2 * t, t}, {t, 2 * t}}) {
      if (w < columns && h < bands) total += (bands - h + 1) * (columns - w + 1);
    }
  }
  return total;
}

}  // namespace

TEST(HogBins, AngleArithmetic) {
  EXPECT_EQ(hog::orientation_bin(1, 0), 0u);
  EXPECT_EQ(hog::orientation_bin(0, 1), 2u);
  EXPECT_EQ(hog::orientation_bin(-1, 0), 4u);
  EXPECT_EQ(hog::orientation_bin(0, -1), 6u);
  EXPECT_EQ(hog::orientation_bin(1, -1e-12), 8u);
  pb::Rng rng(2);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(hog::orientation_bin(rng.uniform(-1, 1), rng.uniform(-1, 1)), 9u);
}

TEST(HogHistogram, ConstantAndRamp) {
  pb::Spectrogram flat(8, 8, pb::SpectrogramStage::normalized, 0.4);
  for (double v : hog::hog_histogram(flat, {2, 2, 4, 4})) EXPECT_EQ(v, 0.0);

  pb::Spectrogram ramp(8, 8, pb::SpectrogramStage::normalized);
  for (std::size_t b = 0; b < 8; ++b) {
    for (std::size_t c = 0; c < 8; ++c) ramp(b, c) = 0.1 * c;
  }
  const auto h = hog::hog_histogram(ramp, {2, 2, 4, 4});
  EXPECT_EQ(h[0], 1.0);
  for (std::size_t k = 1; k < 9; ++k) EXPECT_EQ(h[k], 0.0);
}

TEST(HogHistogram, MatchesNaiveOracleOnRandomPatches) {
  pb::Rng rng(21);
  const auto s = pb::testing::random_image(14, 15, rng);
  const auto patches = hog::enumerate_hog(14, 15);
  for (int i = 0; i < 200; ++i) {
    const auto& p = patches[rng.below(patches.size())];
    const auto fast = hog::hog_histogram(s, p);
    const auto slow = naive_histogram(s, p);
    for (std::size_t k = 0; k < 9; ++k) ASSERT_NEAR(fast[k], slow[k], 1e-9);
  }
}

TEST(HogHistogram, NormalizedRangeAndConservation) {
  pb::Rng rng(22);
  for (int i = 0; i < 50; ++i) {
    const auto s = pb::testing::random_image(14, 15, rng);
    const HogPatch p{rng.below(7), rng.below(7), 4, 6};
    const auto raw = hog::raw_histogram(s, p);
    double total = 0.0, expected = 0.0;
    for (double v : raw) total += v;
    const double cb = p.band + 2.5, cc = p.column + 1.5;
    for (std::size_t b = std::max<std::size_t>(p.band, 1); b < std::min<std::size_t>(p.band + 6, 13); ++b) {
      for (std::size_t c = std::max<std::size_t>(p.column, 1); c < std::min<std::size_t>(p.column + 4, 14); ++c) {
        expected += std::hypot(s(b, c + 1) - s(b, c - 1), s(b + 1, c) - s(b - 1, c)) / (std::hypot(b - cb, c - cc) + 0.5);
      }
    }
    EXPECT_NEAR(total, expected, 1e-9);
    const auto h = hog::hog_histogram(s, p);
    double peak = 0.0;
    for (double v : h) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      peak = std::max(peak, v);
    }
    EXPECT_EQ(peak, 1.0);
  }
}

TEST(HogHistogram, Errors) {
  pb::Spectrogram s(4, 4, pb::SpectrogramStage::normalized, 0.0);
  EXPECT_THROW(hog::hog_histogram(s, {3, 3, 2, 2}), pb::InvalidArgument);
  pb::Spectrogram thin(1, 10, pb::SpectrogramStage::normalized, 0.0);
  EXPECT_THROW(hog::hog_histogram(thin, {0, 0, 2, 1}), pb::InvalidArgument);
}

TEST(HogEnumerate, CountsAndStrictness) {
  const auto small = hog::enumerate_hog(4, 4);
  EXPECT_EQ(small.size(), 9u);
  for (const auto& p : small) {
    EXPECT_EQ(p.width, 2u);
    EXPECT_EQ(p.height, 2u);
  }
  EXPECT_EQ(hog::enumerate_hog(14, 15).size(), 1050u);
  EXPECT_EQ(hog::enumerate_hog(14, 15).size(), count_oracle(14, 15));
  EXPECT_EQ(hog::enumerate_hog(42, 15).size(), count_oracle(42, 15));
  EXPECT_EQ(hog::enumerate_hog(14, 15), hog::enumerate_hog(14, 15));
}

TEST(HogFeature, BiasOnlyAndOffsetInvariance) {
  pb::Rng rng(3);
  hog::HogSvmFeature f;
  f.patch = {2, 3, 4, 4};
  f.bias = -0.7;
  const auto s = pb::testing::random_image(14, 15, rng);
  EXPECT_EQ(hog::eval_hog_feature(f, s), -0.7);
  for (double& w : f.weights) w = rng.uniform(-2, 2);
  auto shifted = s;
  for (double& v : shifted.values()) v += 3.0;
  EXPECT_NEAR(hog::eval_hog_feature(f, s), hog::eval_hog_feature(f, shifted), 1e-9);
}

TEST(HogFeature, SerializationRoundTrip) {
  hog::HogSvmFeature f;
  f.patch = {1, 2, 8, 4};
  f.weights = {-3.33, -3.42, 0.431, 0.199, 1.30, 1.04, 2.26, -0.41, 0.12};
  f.bias = 0.1 + 0.2;
  const auto back = hog::parse_hog(hog::serialize(f));
  EXPECT_EQ(back.patch, f.patch);
  EXPECT_EQ(back.weights, f.weights);
  EXPECT_EQ(back.bias, f.bias);
  EXPECT_THROW(hog::parse_hog("hog 1 2 8 4 1 2 3"), pb::FormatError);
}

// Weights of the kind reported for an 8x4 patch: negative on the first two
// bins, positive around bins 4..6. A rising ramp (bin 0) should score below a
// falling ramp (bin 4).
TEST(HogFeature, ReportedWeightSignPatternOnOrientedEdges) {
  hog::HogSvmFeature f;
  f.patch = {2, 2, 8, 4};
  f.weights = {-3.33, -3.42, 0.431, 0.199, 1.30, 1.04, 2.26, -0.41, 0.12};
  pb::Spectrogram rising(10, 14, pb::SpectrogramStage::normalized), falling = rising;
  for (std::size_t b = 0; b < 10; ++b) {
    for (std::size_t c = 0; c < 14; ++c) {
      rising(b, c) = 0.05 * c;
      falling(b, c) = 1.0 - 0.05 * c;
    }
  }
  EXPECT_LT(hog::eval_hog_feature(f, rising), 0.0);
  EXPECT_GT(hog::eval_hog_feature(f, falling), 0.0);
}

TEST(Pooling, ColumnsSpan) {
  EXPECT_EQ(hog::pooled_columns(4, 2, 15, 15), std::vector<std::size_t>{4});
  // t*T1/T0 = 4*20/15 = 5.33 -> floor 5, ceil 6 -> {4, 5, 6}
  EXPECT_EQ(hog::pooled_columns(4, 2, 15, 20), (std::vector<std::size_t>{4, 5, 6}));
  // 3*30/15 = 6 exactly -> {5, 6}
  EXPECT_EQ(hog::pooled_columns(3, 2, 15, 30), (std::vector<std::size_t>{5, 6}));
  EXPECT_EQ(hog::pooled_columns(0, 2, 15, 20), (std::vector<std::size_t>{0}));
  EXPECT_EQ(hog::pooled_columns(13, 4, 15, 18), (std::vector<std::size_t>{14}));
  EXPECT_THROW(hog::pooled_columns(2, 2, 15, 14), pb::InvalidArgument);
}

TEST(Pooling, CollapsesAtStandardLengthAndMaxDominatesAvg) {
  pb::Rng rng(44);
  hog::HogSvmFeature f;
  f.patch = {2, 4, 4, 2};
  for (double& w : f.weights) w = rng.uniform(-1, 1);
  const auto s = pb::testing::random_image(14, 15, rng);
  EXPECT_EQ(hog::pooled_hog_feature(f, s, 15, hog::Pooling::avg), hog::eval_hog_feature(f, s));
  EXPECT_EQ(hog::pooled_hog_feature(f, s, 15, hog::Pooling::max), hog::eval_hog_feature(f, s));

  for (int trial = 0; trial < 20; ++trial) {
    const auto longer = pb::testing::random_image(14, 15 + rng.below(20), rng);
    const auto avg = hog::pooled_histogram(longer, f.patch, 15, hog::Pooling::avg);
    const auto mx = hog::pooled_histogram(longer, f.patch, 15, hog::Pooling::max);
    for (std::size_t k = 0; k < 9; ++k) EXPECT_GE(mx[k], avg[k] - 1e-15);
  }

  // Time-invariant image: every shifted histogram is the same.
  pb::Spectrogram striped(14, 30, pb::SpectrogramStage::normalized);
  for (std::size_t b = 0; b < 14; ++b) {
    for (std::size_t c = 0; c < 30; ++c) striped(b, c) = (b % 3) * 0.3;
  }
  HogPatch at_standard = f.patch;
  const auto single = hog::hog_histogram(striped, at_standard);
  const auto pooled = hog::pooled_histogram(striped, f.patch, 15, hog::Pooling::avg);
  for (std::size_t k = 0; k < 9; ++k) EXPECT_NEAR(pooled[k], single[k], 1e-12);
}

TEST(Svm, SeparableDataIsFitWithMargin) {
  std::vector<hog::HogHistogram> pos, neg;
  pb::Rng rng(8);
  for (int i = 0; i < 40; ++i) {
    hog::HogHistogram p{}, n{};
    for (std::size_t k = 0; k < 9; ++k) {
      p[k] = rng.uniform(0, 0.5);
      n[k] = rng.uniform(0, 0.5);
    }
    p[3] = rng.uniform(0.8, 1.0);
    n[3] = rng.uniform(0.0, 0.2);
    pos.push_back(p);
    neg.push_back(n);
  }
  const auto f = hog::train_patch_svm({0, 0, 2, 2}, pos, neg);
  for (const auto& h : pos) EXPECT_GT(f.apply(h), 0.0);
  for (const auto& h : neg) EXPECT_LT(f.apply(h), 0.0);
  EXPECT_GT(f.weights[3], 0.0);

  const auto flipped = hog::train_patch_svm({0, 0, 2, 2}, neg, pos);
  for (std::size_t k = 0; k < 9; ++k) EXPECT_NEAR(flipped.weights[k], -f.weights[k], 1e-4);
  EXPECT_NEAR(flipped.bias, -f.bias, 1e-4);
}

TEST(Svm, DegenerateAndDeterministic) {
  hog::HogHistogram same{};
  same.fill(0.5);
  const std::vector<hog::HogHistogram> pos(5, same), neg(5, same);
  const auto f = hog::train_patch_svm({0, 0, 2, 2}, pos, neg);
  EXPECT_TRUE(std::isfinite(f.apply(same)));
  EXPECT_LE(std::abs(f.apply(same)), 1.0 + 1e-6);
  EXPECT_THROW(hog::train_patch_svm({0, 0, 2, 2}, pos, {}), pb::InvalidArgument);

  std::vector<double> rows{0, 1, 1, 0, 0.2, 0.9, 0.8, 0.1};
  std::vector<int> labels{1, -1, 1, -1};
  const auto a = pb::svm::train_linear_svm(rows, 2, labels, {1.0, 2000, 1e-6, 7});
  const auto b = pb::svm::train_linear_svm(rows, 2, labels, {1.0, 2000, 1e-6, 7});
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}
