#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>

#include "phoneboost/boosting.hpp"
#include "phoneboost/error.hpp"
#include "phoneboost/random.hpp"
#include "phoneboost/text.hpp"

namespace pb = phoneboost;
namespace bst = phoneboost::boosting;
using bst::SampleMatrix;

namespace {

SampleMatrix one_feature(const std::vector<double>& x, const std::vector<int>& y, const std::vector<double>& w) {
  std::vector<std::vector<double>> rows;
  for (double v : x) rows.push_back({v});
  auto m = SampleMatrix::from_rows(rows, y);
  m.weights() = w;
  return m;
}

SampleMatrix random_matrix(std::size_t n, std::size_t features, pb::Rng& rng, bool integer_values) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(features));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = rng.uniform() < 0.5 ? -1 : 1;
    for (double& v : rows[i]) v = integer_values ? static_cast<double>(rng.below(6)) : rng.uniform(-1, 1);
  }
  labels[0] = 1;
  labels[1] = -1;
  return SampleMatrix::from_rows(rows, labels);
}

std::vector<double> candidate_thresholds(std::span<const double> column) {
  std::vector<double> v(column.begin(), column.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::vector<double> out{v.front() - 1.0};
  for (std::size_t i = 0; i + 1 < v.size(); ++i) out.push_back(0.5 * (v[i] + v[i + 1]));
  return out;
}

// Exhaustive search: every threshold, both polarities, errors summed directly.
double discrete_oracle(const SampleMatrix& m, std::size_t f) {
  double best = 1e300;
  for (double t : candidate_thresholds(m.feature_column(f))) {
    for (int pol : {1, -1}) {
      double e = 0.0;
      for (std::size_t i = 0; i < m.sample_count(); ++i) {
        const int out = m.value(i, f) > t ? pol : -pol;
        if (out != m.labels()[i]) e += m.weights()[i];
      }
      best = std::min(best, e);
    }
  }
  return best;
}

double gentle_oracle(const SampleMatrix& m, std::size_t f) {
  double best = 1e300;
  for (double t : candidate_thresholds(m.feature_column(f))) {
    double sa = 0, wa = 0, sb = 0, wb = 0;
    for (std::size_t i = 0; i < m.sample_count(); ++i) {
      (m.value(i, f) > t ? sa : sb) += m.labels()[i] * m.weights()[i];
      (m.value(i, f) > t ? wa : wb) += m.weights()[i];
    }
    const double a = wa > 0 ? sa / wa : 0.0;
    const double b = wb > 0 ? sb / wb : 0.0;
    double e = 0.0;
    for (std::size_t i = 0; i < m.sample_count(); ++i) {
      const double r = m.labels()[i] - (m.value(i, f) > t ? a : b);
      e += m.weights()[i] * r * r;
    }
    best = std::min(best, e);
  }
  return best;
}

std::vector<bool> partition(const bst::Stump& s, std::span<const double> column) {
  std::vector<bool> out;
  for (double v : column) out.push_back(v > s.threshold);
  return out;
}

}  // namespace

TEST(Stump, OutputsAndDiscreteConstruction) {
  const auto s = bst::discrete_stump(2, 0.5, -1);
  EXPECT_EQ(s.output(0.6), -1.0);
  EXPECT_EQ(s.output(0.5), 1.0);
  EXPECT_EQ(bst::parse_mode("gentle"), bst::Mode::gentle);
  EXPECT_EQ(bst::to_string(bst::Mode::discrete), "discrete");
  EXPECT_THROW(bst::parse_mode("real"), pb::ValidationError);
}

TEST(FitDiscrete, SeparatingAndConstantFeatures) {
  auto sep = one_feature({0.1, 0.2, 0.7, 0.9}, {-1, -1, 1, 1}, {0.25, 0.25, 0.25, 0.25});
  const auto fit = bst::fit_stump_discrete(sep, 0);
  EXPECT_EQ(fit.error, 0.0);
  EXPECT_DOUBLE_EQ(fit.stump.threshold, 0.45);
  EXPECT_EQ(fit.stump.polarity, 1);

  auto flat = one_feature({0.3, 0.3, 0.3, 0.3}, {-1, 1, -1, 1}, {0.25, 0.25, 0.25, 0.25});
  EXPECT_EQ(bst::fit_stump_discrete(flat, 0).error, 0.5);
}

TEST(FitDiscrete, WeightedHandCaseMatchesOracle) {
  // Thresholds {sentinel, 1.5, 2.5, 3.5} x polarity give errors
  // {0.3, 0.4, 0.4, 0.6} and {0.7, 0.6, 0.6, 0.4}.
  auto m = one_feature({1, 2, 3, 4}, {1, -1, 1, 1}, {0.4, 0.3, 0.2, 0.1});
  const auto fit = bst::fit_stump_discrete(m, 0);
  EXPECT_DOUBLE_EQ(fit.error, 0.3);
  EXPECT_LT(fit.stump.threshold, 1.0);
  EXPECT_EQ(fit.stump.polarity, 1);
  EXPECT_DOUBLE_EQ(discrete_oracle(m, 0), 0.3);
}

TEST(FitDiscrete, TiesGoToTheSmallerThreshold) {
  // 1.5 and 3.5 both misclassify one sample of weight 1/4.
  auto m = one_feature({1, 2, 3, 4}, {-1, 1, -1, 1}, {0.25, 0.25, 0.25, 0.25});
  const auto fit = bst::fit_stump_discrete(m, 0);
  EXPECT_DOUBLE_EQ(fit.error, 0.25);
  EXPECT_DOUBLE_EQ(fit.stump.threshold, 1.5);
}

TEST(FitDiscrete, RandomCasesMatchExhaustiveOracle) {
  pb::Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_matrix(4 + rng.below(30), 3, rng, trial % 2 == 0);
    for (double& w : m.weights()) w = rng.uniform();
    for (std::size_t f = 0; f < 3; ++f) {
      const auto fit = bst::fit_stump_discrete(m, f);
      EXPECT_NEAR(fit.error, discrete_oracle(m, f), 1e-12);
    }
  }
}

TEST(FitGentle, PureBranchesAndWeightedMean) {
  auto sep = one_feature({0.1, 0.2, 0.7, 0.9}, {-1, -1, 1, 1}, {0.25, 0.25, 0.25, 0.25});
  const auto fit = bst::fit_stump_gentle(sep, 0);
  EXPECT_EQ(fit.stump.above, 1.0);
  EXPECT_EQ(fit.stump.below, -1.0);
  EXPECT_EQ(fit.error, 0.0);

  auto mixed = one_feature({1, 1, 2, 2}, {1, -1, -1, -1}, {0.375, 0.125, 0.25, 0.25});
  const auto g = bst::fit_stump_gentle(mixed, 0);
  EXPECT_DOUBLE_EQ(g.stump.below, 0.5);
  EXPECT_DOUBLE_EQ(g.stump.above, -1.0);
}

TEST(FitGentle, EmptyBranchOutputsZero) {
  auto flat = one_feature({0.3, 0.3, 0.3, 0.3}, {1, 1, 1, -1}, {0.25, 0.25, 0.25, 0.25});
  const auto fit = bst::fit_stump_gentle(flat, 0);
  EXPECT_EQ(fit.stump.above, 0.5);
  EXPECT_EQ(fit.stump.below, 0.0);
}

TEST(FitGentle, RandomTwentySampleCasesMatchOracle) {
  pb::Rng rng(78);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_matrix(20, 2, rng, trial % 2 == 0);
    for (double& w : m.weights()) w = rng.uniform();
    for (std::size_t f = 0; f < 2; ++f) EXPECT_NEAR(bst::fit_stump_gentle(m, f).error, gentle_oracle(m, f), 1e-12);
  }
}

TEST(FitStump, MonotoneTransformKeepsPartition) {
  pb::Rng rng(79);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = random_matrix(25, 1, rng, trial % 3 == 0);
    auto t = m;
    for (double& v : t.feature_column(0)) v = std::exp(3 * v) + v * v * v;
    EXPECT_EQ(partition(bst::fit_stump_discrete(m, 0).stump, m.feature_column(0)),
              partition(bst::fit_stump_discrete(t, 0).stump, t.feature_column(0)));
    EXPECT_EQ(partition(bst::fit_stump_gentle(m, 0).stump, m.feature_column(0)),
              partition(bst::fit_stump_gentle(t, 0).stump, t.feature_column(0)));
  }
}

TEST(TrainDiscrete, WeightsSumToOneAndMisclassifiedMassIsHalf) {
  pb::Rng rng(80);
  const auto m = random_matrix(60, 5, rng, false);
  std::size_t checked = 0;
  bst::train_discrete(m, 20, [&](const bst::RoundInfo& info) {
    EXPECT_NEAR(std::accumulate(info.weights.begin(), info.weights.end(), 0.0), 1.0, 1e-12);
    for (double w : info.weights) EXPECT_GE(w, 0.0);
    if (info.error <= bst::kErrorClamp) return;
    double wrong = 0.0;
    for (std::size_t i = 0; i < m.sample_count(); ++i) {
      if (info.chosen.stump.output(m.value(i, info.chosen.stump.feature_index)) != m.labels()[i]) wrong += info.weights[i];
    }
    EXPECT_NEAR(wrong, 0.5, 1e-9);
    EXPECT_NEAR(info.chosen.weight, std::log((1 - info.error) / info.error), 1e-12);
    ++checked;
  });
  EXPECT_GT(checked, 0u);
}

TEST(TrainDiscrete, QuarterErrorGivesLogThree) {
  // Best stump misclassifies exactly one of four equally weighted samples.
  auto m = one_feature({1, 2, 3, 4}, {-1, 1, -1, 1}, {0.25, 0.25, 0.25, 0.25});
  const auto r = bst::train_discrete(m, 1);
  ASSERT_EQ(r.classifier.rounds.size(), 1u);
  EXPECT_NEAR(r.classifier.rounds[0].weight, std::log(3.0), 1e-12);
}

TEST(TrainDiscrete, SeparableToyReachesZeroTrainingError) {
  // Positive iff x0 > 0.5 and x1 > 0.5: needs more than one stump.
  pb::Rng rng(81);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    const double a = rng.uniform(), b = rng.uniform();
    rows.push_back({a, b});
    labels.push_back(a > 0.5 && b > 0.5 ? 1 : -1);
  }
  const auto m = SampleMatrix::from_rows(rows, labels);
  const auto r = bst::train_discrete(m, 10);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(r.classifier.classify(rows[i]), labels[i]);
}

TEST(TrainDiscrete, StopsWhenNoStumpBeatsChance) {
  auto m = one_feature({0.2, 0.2, 0.2, 0.2}, {1, -1, 1, -1}, {0.25, 0.25, 0.25, 0.25});
  const auto r = bst::train_discrete(m, 5);
  EXPECT_TRUE(r.terminated_early);
  EXPECT_TRUE(r.classifier.rounds.empty());
}

TEST(TrainGentle, LossNeverIncreasesAndWeightsNormalized) {
  pb::Rng rng(82);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = random_matrix(80, 6, rng, trial % 2 == 1);
    std::vector<double> first_update;
    const auto r = bst::train_gentle(m, 25, [&](const bst::RoundInfo& info) {
      EXPECT_NEAR(std::accumulate(info.weights.begin(), info.weights.end(), 0.0), 1.0, 1e-12);
      if (info.round == 0) first_update.assign(info.weights.begin(), info.weights.end());
    });
    double previous = bst::exponential_loss(r.classifier, m, 0);
    EXPECT_DOUBLE_EQ(previous, static_cast<double>(m.sample_count()));
    for (std::size_t k = 1; k <= r.classifier.rounds.size(); ++k) {
      const double loss = bst::exponential_loss(r.classifier, m, k);
      EXPECT_LE(loss, previous * (1 + 1e-12));
      previous = loss;
    }
    // w_i <- w_i exp(-y_i f(x_i)) from uniform start, renormalized.
    const auto& s = r.classifier.rounds[0].stump;
    std::vector<double> expected(m.sample_count());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      expected[i] = std::exp(-m.labels()[i] * s.output(m.value(i, s.feature_index))) / m.sample_count();
    }
    const double total = std::accumulate(expected.begin(), expected.end(), 0.0);
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(first_update[i], expected[i] / total, 1e-15);
  }
}

TEST(Train, DeterministicAcrossRunsAndThreadCounts) {
  pb::Rng rng(83);
  const auto m = random_matrix(50, 40, rng, true);
  const char* saved = std::getenv("PHONEBOOST_THREADS");
  const std::string restore = saved ? saved : "";
  ::setenv("PHONEBOOST_THREADS", "1", 1);
  const auto serial_g = bst::train_gentle(m, 15).classifier;
  const auto serial_d = bst::train_discrete(m, 15).classifier;
  ::setenv("PHONEBOOST_THREADS", "7", 1);
  EXPECT_EQ(bst::train_gentle(m, 15).classifier, serial_g);
  EXPECT_EQ(bst::train_discrete(m, 15).classifier, serial_d);
  EXPECT_EQ(bst::train_gentle(m, 15).classifier, bst::train_gentle(m, 15).classifier);
  if (saved) {
    ::setenv("PHONEBOOST_THREADS", restore.c_str(), 1);
  } else {
    ::unsetenv("PHONEBOOST_THREADS");
  }
}

TEST(Train, ArgminPrefersLowestFeatureOnTies) {
  // Features 1 and 3 are identical perfect separators.
  std::vector<std::vector<double>> rows{{0, 0, 5, 0}, {0, 1, 5, 1}, {1, 0, 5, 0}, {1, 1, 5, 1}};
  const auto m = SampleMatrix::from_rows(rows, {-1, 1, -1, 1});
  EXPECT_EQ(bst::train_discrete(m, 1).classifier.rounds[0].stump.feature_index, 1u);
  EXPECT_EQ(bst::train_gentle(m, 1).classifier.rounds[0].stump.feature_index, 1u);
}

TEST(Classifier, ScorePrefixesAndEmpty) {
  bst::StrongClassifier c;
  c.mode = bst::Mode::discrete;
  const std::vector<double> x{0.9, 0.1};
  EXPECT_EQ(c.score(x), 0.0);
  EXPECT_EQ(c.classify(x), -1);
  c.rounds.push_back({bst::discrete_stump(0, 0.5, 1), 1.0});
  EXPECT_EQ(c.score(x), 1.0);
  c.rounds.push_back({bst::discrete_stump(1, 0.5, 1), 0.25});
  c.rounds.push_back({bst::discrete_stump(1, 0.0, -1), 2.0});
  EXPECT_EQ(c.score(x, 1), 1.0);
  EXPECT_EQ(c.score(x, 2), 0.75);
  EXPECT_EQ(c.score(x, 3), -1.25);
  EXPECT_EQ(c.score(x), -1.25);
  c.rounds.push_back({bst::discrete_stump(5, 0.0, 1), 1.0});
  EXPECT_THROW(c.score(x), pb::InvalidArgument);
  EXPECT_EQ(c.score(x, 3), -1.25);
}

TEST(Classifier, SerializationRoundTrip) {
  pb::Rng rng(84);
  const auto m = random_matrix(30, 4, rng, false);
  for (auto mode : {bst::Mode::discrete, bst::Mode::gentle}) {
    auto c = bst::train(m, mode, 12).classifier;
    c.negative_label = "m";
    c.positive_label = "n";
    const auto text = bst::serialize(c);
    const auto lines = pb::text::split(text, '\n');
    EXPECT_EQ(bst::parse_strong_classifier(lines), c);
  }
  const std::vector<std::string> bad{"phoneboost-strong 1", "mode gentle", "labels a b", "rounds 1",
                                     "round 0 0.5 3 1 -1 1"};
  EXPECT_THROW(bst::parse_strong_classifier(bad), pb::FormatError);
  const std::vector<std::string> wrong_header{"nonsense"};
  EXPECT_THROW(bst::parse_strong_classifier(wrong_header), pb::FormatError);
}

TEST(SampleMatrixLayout, RowsAndColumns) {
  const auto m = SampleMatrix::from_rows({{1, 2, 3}, {4, 5, 6}}, {1, -1});
  EXPECT_EQ(m.feature_column(1)[1], 5.0);
  EXPECT_EQ(m.row(0), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(m.weights(), (std::vector<double>{0.5, 0.5}));
  EXPECT_THROW(SampleMatrix::from_rows({{1}, {2, 3}}, {1, -1}), pb::InvalidArgument);
  EXPECT_THROW(SampleMatrix::from_rows({{1}, {2}}, {1, 0}), pb::InvalidArgument);
}
