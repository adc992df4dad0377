#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "phoneboost/boosting.hpp"
#include "phoneboost/config.hpp"
#include "phoneboost/corpus.hpp"
#include "phoneboost/features.hpp"
#include "phoneboost/phone_set.hpp"
#include "phoneboost/voting.hpp"

namespace phoneboost::multiclass {

/// Label used as the negative side of one-vs-all classifiers.
inline constexpr std::string_view kRestLabel = "*rest*";

/// A strong classifier plus the descriptors its stumps reference.
/// strong.rounds[k].stump.feature_index indexes `features`.
struct PairClassifier {
  boosting::StrongClassifier strong;
  std::vector<FeatureDescriptor> features;

  std::vector<double> feature_values(const PreparedSample& s, const PipelineConfig& config) const;
  double score(const PreparedSample& s, const PipelineConfig& config,
               std::size_t max_rounds = boosting::StrongClassifier::kAllRounds) const;
  /// positive_label when the score is positive, negative_label otherwise.
  const std::string& decide(const PreparedSample& s, const PipelineConfig& config) const;
};

/// Keeps only the candidates referenced by `strong` (first-use order) and
/// renumbers the stumps accordingly.
PairClassifier compact(boosting::StrongClassifier strong, const std::vector<FeatureDescriptor>& candidates);

/// Training samples rendered once and shared by all pairs.
struct PreparedCorpus {
  PhoneSet phone_set;
  std::vector<PreparedSample> samples;
  std::vector<std::size_t> labels;  ///< index into phone_set
  std::vector<PhoneSegment> segments;

  std::vector<std::size_t> indices_of(std::size_t label) const;
};

PreparedCorpus prepare_corpus(const FeaturePipeline& pipeline, const PhoneSet& phone_set,
                              std::span<const CorpusItem> items);

/// Boosts a classifier scoring `negatives` as -1 and `positives` as +1.
PairClassifier train_binary(const FeaturePipeline& pipeline, std::span<const PreparedSample* const> negatives,
                            std::span<const PreparedSample* const> positives, std::string negative_label,
                            std::string positive_label, std::uint64_t seed,
                            const boosting::RoundObserver& observer = {});

/// Classifier between phones a (scored -1) and b (scored +1), trained on
/// their samples only. Throws ValidationError naming a phone without samples.
PairClassifier train_pairwise(const FeaturePipeline& pipeline, const PreparedCorpus& corpus, std::size_t a,
                              std::size_t b);

/// Phone `label` (+1) against every other phone (-1).
PairClassifier train_one_vs_all(const FeaturePipeline& pipeline, const PreparedCorpus& corpus, std::size_t label);

std::size_t pair_count(std::size_t n);
/// Position of pair (a, b), a < b, in the order (0,1), (0,2), ..., (1,2), ...
std::size_t pair_slot(std::size_t n, std::size_t a, std::size_t b);

struct MulticlassModel {
  PhoneSet phone_set;
  PipelineConfig config;
  ResolvedPipeline resolved;
  std::vector<PairClassifier> pairwise;    ///< pair_slot order; pair (a, b) scores a as -1
  std::vector<PairClassifier> one_vs_all;  ///< empty, or one per phone

  const PairClassifier& pair(std::size_t a, std::size_t b) const;
  FeaturePipeline pipeline() const { return FeaturePipeline(config, resolved); }
  /// Throws ValidationError unless there are N(N-1)/2 pair classifiers whose
  /// labels match their slots (and, when present, N matching one-vs-all ones).
  void validate() const;
};

struct TrainOptions {
  bool one_vs_all = false;
  /// Called once per trained classifier, in a fixed order.
  std::function<void(const std::string&)> log;
};

MulticlassModel train_model(const PipelineConfig& config, const Corpus& training, const TrainOptions& options = {});

struct Classification {
  std::size_t label = 0;
  VoteTally tally;  ///< empty for one-vs-all
};

Classification classify(const MulticlassModel& model, const PreparedSample& sample, const VotingScheme& scheme);

}  // namespace phoneboost::multiclass
