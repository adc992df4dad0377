#include <gtest/gtest.h>

#include <set>

#include "phoneboost/error.hpp"
#include "phoneboost/haar.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace pb = phoneboost;
using pb::testing::direct_haar;
using pb::testing::naive_histogram;
using pb::testing::direct_power;
using pb::testing::random_signal;
namespace haar = phoneboost::haar;
using haar::HaarFeature;
using haar::Kind;

namespace {

double direct_sum(const pb::Spectrogram& s, std::size_t b, std::size_t c, std::size_t h, std::size_t w) {
  double acc = 0.0;
  for (std::size_t i = b; i < b + h; ++i) {
    for (std::size_t j = c; j < c + w; ++j) acc += s(i, j);
  }
  return acc;
}

std::size_t count_oracle(std::size_t bands, std::size_t columns, const std::vector<std::size_t>& scales) {
  const std::pair<std::size_t, std::size_t> grids[] = {{1, 2}, {2, 1}, {1, 3}, {3, 1}, {3, 3}, {2, 2}};
  std::size_t total = 0;
  for (const auto& [gc, gb] : grids) {
    for (std::size_t sy : scales) {
      for (std::size_t sx : scales) {
        if (gb * sy <= bands && gc * sx <= columns) total += (bands - gb * sy + 1) * (columns - gc * sx + 1);
      }
    }
  }
  return total;
}

}  // namespace

TEST(Integral, OnesAndEmptyRectangles) {
  pb::Spectrogram ones(3, 3, pb::SpectrogramStage::normalized, 1.0);
  const auto img = haar::integral(ones);
  EXPECT_EQ(img.rect_sum(0, 0, 3, 3), 9.0);
  EXPECT_EQ(img.rect_sum(1, 2, 0, 1), 0.0);
  EXPECT_EQ(img.rect_sum(1, 2, 2, 0), 0.0);
  for (std::size_t j = 0; j <= 3; ++j) EXPECT_EQ(img.at(0, j), 0.0);
  for (std::size_t i = 0; i <= 3; ++i) EXPECT_EQ(img.at(i, 0), 0.0);
}

TEST(Integral, EveryRectangleMatchesDirectSum) {
  pb::Rng rng(5);
  const auto s = pb::testing::random_image(10, 10, rng);
  const auto img = haar::integral(s);
  for (std::size_t b = 0; b < 10; ++b) {
    for (std::size_t c = 0; c < 10; ++c) {
      for (std::size_t h = 1; b + h <= 10; ++h) {
        for (std::size_t w = 1; c + w <= 10; ++w) ASSERT_NEAR(img.rect_sum(b, c, h, w), direct_sum(s, b, c, h, w), 1e-9);
      }
    }
  }
}

TEST(Enumerate, TinyImageHasOnlyTwoCellKinds) {
  const auto bank = haar::enumerate_haar(2, 2, {1});
  ASSERT_EQ(bank.size(), 5u);
  std::multiset<Kind> kinds;
  for (const auto& f : bank) kinds.insert(f.kind);
  EXPECT_EQ(kinds.count(Kind::edge_horizontal), 2u);
  EXPECT_EQ(kinds.count(Kind::edge_vertical), 2u);
  EXPECT_EQ(kinds.count(Kind::diagonal), 1u);
}

TEST(Enumerate, CountsMatchCombinatorialOracle) {
  EXPECT_EQ(haar::enumerate_haar(14, 15, {1, 2, 3}).size(), count_oracle(14, 15, {1, 2, 3}));
  EXPECT_EQ(haar::enumerate_haar(14, 15, {1, 2, 3}).size(), 7092u);
  const auto all = haar::all_scales(14, 15);
  EXPECT_EQ(all.size(), 15u);
  EXPECT_EQ(haar::enumerate_haar(14, 15, all).size(), 22829u);
  EXPECT_EQ(haar::enumerate_haar(42, 15, {1, 2, 3, 4}).size(), count_oracle(42, 15, {1, 2, 3, 4}));
  EXPECT_EQ(haar::enumerate_haar(14, 15, {3, 1, 2, 2}), haar::enumerate_haar(14, 15, {1, 2, 3}));
  EXPECT_THROW(haar::enumerate_haar(14, 15, {}), pb::InvalidArgument);
}

TEST(Enumerate, DeterministicDistinctAndInBounds) {
  const auto bank = haar::enumerate_haar(14, 15, haar::all_scales(14, 15));
  EXPECT_EQ(bank, haar::enumerate_haar(14, 15, haar::all_scales(14, 15)));
  std::set<std::string> seen;
  for (const auto& f : bank) {
    EXPECT_TRUE(f.fits(14, 15));
    EXPECT_TRUE(seen.insert(haar::serialize(f)).second) << haar::serialize(f);
  }
}

TEST(Eval, MatchesDirectPixelSummationOnRandomImages) {
  pb::Rng rng(11);
  const auto bank = haar::enumerate_haar(14, 15, haar::all_scales(14, 15));
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = pb::testing::random_image(14, 15, rng);
    const auto img = haar::integral(s);
    for (const auto& f : bank) ASSERT_NEAR(haar::eval_haar(f, img), direct_haar(f, s), 1e-9) << haar::serialize(f);
  }
}

TEST(Eval, ConstantImagesGiveExactlyZero) {
  pb::Rng rng(13);
  const auto bank = haar::enumerate_haar(14, 15, haar::all_scales(14, 15));
  for (double value : {0.0, 1.0, 0.1, 1.0 / 3.0, rng.uniform(), rng.uniform()}) {
    const auto img = haar::integral(pb::Spectrogram(14, 15, pb::SpectrogramStage::normalized, value));
    for (const auto& f : bank) ASSERT_EQ(haar::eval_haar(f, img), 0.0) << haar::serialize(f) << " at " << value;
  }
}

TEST(Eval, OffsetInvariance) {
  pb::Rng rng(14);
  const auto bank = haar::enumerate_haar(14, 15, {1, 2, 3});
  const auto s = pb::testing::random_image(14, 15, rng);
  auto shifted = s;
  for (double& v : shifted.values()) v += 0.25;
  const auto a = haar::integral(s);
  const auto b = haar::integral(shifted);
  for (const auto& f : bank) EXPECT_NEAR(haar::eval_haar(f, a), haar::eval_haar(f, b), 1e-9);
}

TEST(Eval, EdgeVerticalLeftBrightIsPositiveHalfArea) {
  pb::Spectrogram s(4, 6, pb::SpectrogramStage::normalized, 0.0);
  for (std::size_t b = 0; b < 4; ++b) {
    for (std::size_t c = 0; c < 3; ++c) s(b, c) = 1.0;
  }
  const auto img = haar::integral(s);
  EXPECT_EQ(haar::eval_haar(HaarFeature{Kind::edge_vertical, 0, 0, 6, 4}, img), 12.0);
  EXPECT_THROW(haar::eval_haar(HaarFeature{Kind::edge_vertical, 0, 2, 6, 4}, img), pb::InvalidArgument);
  EXPECT_THROW(haar::eval_haar(HaarFeature{Kind::line_vertical, 0, 0, 4, 4}, img), pb::InvalidArgument);
}

TEST(Descriptor, RoundTripAndErrors) {
  for (const auto& f : haar::enumerate_haar(6, 7, {1, 2})) EXPECT_EQ(haar::parse_haar(haar::serialize(f)), f);
  EXPECT_EQ(haar::serialize(HaarFeature{Kind::center_surround, 2, 3, 6, 3}), "haar center_surround 2 3 6 3");
  EXPECT_THROW(haar::parse_haar("haar diagonal 0 0 3 2"), pb::FormatError);
  EXPECT_THROW(haar::parse_haar("haar sideways 0 0 2 2"), pb::FormatError);
  EXPECT_THROW(haar::parse_haar("haar edge_vertical 0 0 2"), pb::FormatError);
  EXPECT_THROW(haar::parse_haar("haar edge_vertical -1 0 2 1"), pb::FormatError);
}
