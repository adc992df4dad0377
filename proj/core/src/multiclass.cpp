#include "phoneboost/multiclass.hpp"

#include <map>

#include "phoneboost/error.hpp"
#include "phoneboost/parallel.hpp"
#include "phoneboost/random.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost::multiclass {

std::vector<double> PairClassifier::feature_values(const PreparedSample& s, const PipelineConfig& config) const {
  std::vector<double> values(features.size());
  for (std::size_t k = 0; k < features.size(); ++k) values[k] = evaluate(features[k], s, config);
  return values;
}

double PairClassifier::score(const PreparedSample& s, const PipelineConfig& config, std::size_t max_rounds) const {
  return strong.score(feature_values(s, config), max_rounds);
}

const std::string& PairClassifier::decide(const PreparedSample& s, const PipelineConfig& config) const {
  return score(s, config) > 0.0 ? strong.positive_label : strong.negative_label;
}

PairClassifier compact(boosting::StrongClassifier strong, const std::vector<FeatureDescriptor>& candidates) {
  PairClassifier out;
  std::map<std::size_t, std::size_t> remap;
  for (auto& round : strong.rounds) {
    const std::size_t old = round.stump.feature_index;
    if (old >= candidates.size()) throw InvalidArgument("stump references a missing candidate");
    auto [it, inserted] = remap.try_emplace(old, out.features.size());
    if (inserted) out.features.push_back(candidates[old]);
    round.stump.feature_index = it->second;
  }
  out.strong = std::move(strong);
  return out;
}

std::vector<std::size_t> PreparedCorpus::indices_of(std::size_t label) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) out.push_back(i);
  }
  return out;
}

PreparedCorpus prepare_corpus(const FeaturePipeline& pipeline, const PhoneSet& phone_set,
                              std::span<const CorpusItem> items) {
  PreparedCorpus out;
  out.phone_set = phone_set;
  out.samples.resize(items.size());
  out.labels.resize(items.size());
  out.segments.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    out.labels[i] = phone_set.index_of(items[i].segment.label);
    out.segments.push_back(items[i].segment);
  }
  parallel_for(items.size(), [&](std::size_t i) { out.samples[i] = pipeline.prepare(items[i]); });
  return out;
}

PairClassifier train_binary(const FeaturePipeline& pipeline, std::span<const PreparedSample* const> negatives,
                            std::span<const PreparedSample* const> positives, std::string negative_label,
                            std::string positive_label, std::uint64_t seed, const boosting::RoundObserver& observer) {
  if (negatives.empty()) throw ValidationError("no training samples for '" + negative_label + "'");
  if (positives.empty()) throw ValidationError("no training samples for '" + positive_label + "'");
  std::vector<LabeledSample> samples;
  samples.reserve(negatives.size() + positives.size());
  for (const auto* s : negatives) samples.push_back({s, -1});
  for (const auto* s : positives) samples.push_back({s, +1});
  const CandidateSet set = build_candidates(pipeline, samples, seed);
  auto result = boosting::train(set.matrix, pipeline.config().boosting, pipeline.config().rounds, observer);
  result.classifier.negative_label = std::move(negative_label);
  result.classifier.positive_label = std::move(positive_label);
  return compact(std::move(result.classifier), set.candidates);
}

namespace {

std::vector<const PreparedSample*> pointers(const PreparedCorpus& corpus, const std::vector<std::size_t>& indices) {
  std::vector<const PreparedSample*> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(&corpus.samples[i]);
  return out;
}

}  // namespace

PairClassifier train_pairwise(const FeaturePipeline& pipeline, const PreparedCorpus& corpus, std::size_t a,
                              std::size_t b) {
  const auto& labels = corpus.phone_set.labels();
  if (a >= labels.size() || b >= labels.size() || a == b) throw InvalidArgument("invalid phone pair");
  const auto neg = pointers(corpus, corpus.indices_of(a));
  const auto pos = pointers(corpus, corpus.indices_of(b));
  return train_binary(pipeline, neg, pos, labels[a], labels[b], derive_seed(pipeline.config().seed, a + 1, b + 1));
}

PairClassifier train_one_vs_all(const FeaturePipeline& pipeline, const PreparedCorpus& corpus, std::size_t label) {
  const auto& labels = corpus.phone_set.labels();
  if (label >= labels.size()) throw InvalidArgument("invalid phone index");
  std::vector<const PreparedSample*> pos, neg;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    (corpus.labels[i] == label ? pos : neg).push_back(&corpus.samples[i]);
  }
  return train_binary(pipeline, neg, pos, std::string(kRestLabel), labels[label],
                      derive_seed(pipeline.config().seed, label + 1, 0));
}

std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

std::size_t pair_slot(std::size_t n, std::size_t a, std::size_t b) {
  if (!(a < b && b < n)) throw InvalidArgument("pair slot needs a < b < n");
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

const PairClassifier& MulticlassModel::pair(std::size_t a, std::size_t b) const {
  const std::size_t n = phone_set.size();
  const std::size_t slot = pair_slot(n, a, b);
  if (slot >= pairwise.size()) {
    throw ValidationError("incomplete model: no classifier for " + phone_set.labels()[a] + "/" + phone_set.labels()[b]);
  }
  return pairwise[slot];
}

void MulticlassModel::validate() const {
  const std::size_t n = phone_set.size();
  if (n < 2) throw ValidationError("model needs at least two phones");
  if (pairwise.size() != pair_count(n)) {
    throw ValidationError("incomplete model: " + std::to_string(pairwise.size()) + " pair classifiers, expected " +
                          std::to_string(pair_count(n)));
  }
  const auto& labels = phone_set.labels();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto& s = pairwise[pair_slot(n, a, b)].strong;
      if (s.negative_label != labels[a] || s.positive_label != labels[b]) {
        throw ValidationError("pair classifier labels " + s.negative_label + "/" + s.positive_label +
                              " do not match slot " + labels[a] + "/" + labels[b]);
      }
    }
  }
  if (!one_vs_all.empty()) {
    if (one_vs_all.size() != n) throw ValidationError("one-vs-all classifiers must cover every phone");
    for (std::size_t a = 0; a < n; ++a) {
      if (one_vs_all[a].strong.positive_label != labels[a]) {
        throw ValidationError("one-vs-all classifier for '" + labels[a] + "' has mismatched labels");
      }
    }
  }
}

namespace {

std::string summary(const std::string& name, const PairClassifier& c, double train_error) {
  return name + ": " + std::to_string(c.strong.rounds.size()) + " rounds, " + std::to_string(c.features.size()) +
         " features, train error " + text::format_double(train_error);
}

double training_error(const PairClassifier& c, const PipelineConfig& config,
                      std::span<const PreparedSample* const> neg, std::span<const PreparedSample* const> pos) {
  std::size_t wrong = 0;
  for (const auto* s : neg) wrong += c.score(*s, config) > 0.0 ? 1 : 0;
  for (const auto* s : pos) wrong += c.score(*s, config) > 0.0 ? 0 : 1;
  return static_cast<double>(wrong) / static_cast<double>(neg.size() + pos.size());
}

}  // namespace

MulticlassModel train_model(const PipelineConfig& config, const Corpus& training, const TrainOptions& options) {
  config.validate();
  const FeaturePipeline pipeline = FeaturePipeline::fit(config, training.items);
  const PreparedCorpus corpus = prepare_corpus(pipeline, training.phone_set, training.items);
  const auto& labels = training.phone_set.labels();
  const std::size_t n = labels.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (corpus.indices_of(a).empty()) throw ValidationError("no training samples for phone '" + labels[a] + "'");
  }

  MulticlassModel model;
  model.phone_set = training.phone_set;
  model.config = config;
  model.resolved = pipeline.resolved();
  model.pairwise.reserve(pair_count(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      model.pairwise.push_back(train_pairwise(pipeline, corpus, a, b));
      if (options.log) {
        const auto neg = pointers(corpus, corpus.indices_of(a));
        const auto pos = pointers(corpus, corpus.indices_of(b));
        options.log(summary("pair " + labels[a] + " " + labels[b], model.pairwise.back(),
                            training_error(model.pairwise.back(), config, neg, pos)));
      }
    }
  }
  if (options.one_vs_all) {
    for (std::size_t a = 0; a < n; ++a) {
      model.one_vs_all.push_back(train_one_vs_all(pipeline, corpus, a));
      if (options.log) {
        std::vector<const PreparedSample*> pos, neg;
        for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
          (corpus.labels[i] == a ? pos : neg).push_back(&corpus.samples[i]);
        }
        options.log(summary("ova " + labels[a], model.one_vs_all.back(), training_error(model.one_vs_all.back(), config, neg, pos)));
      }
    }
  }
  return model;
}

Classification classify(const MulticlassModel& model, const PreparedSample& sample, const VotingScheme& scheme) {
  const std::size_t n = model.phone_set.size();
  Classification out;
  if (scheme.kind == VotingKind::one_vs_all) {
    if (model.one_vs_all.size() != n) throw ValidationError("model has no one-vs-all classifiers (train with --ova)");
    std::vector<double> scores(n);
    for (std::size_t a = 0; a < n; ++a) scores[a] = model.one_vs_all[a].score(sample, model.config);
    out.label = argmax_first(scores);
    return out;
  }
  if (model.pairwise.size() != pair_count(n)) {
    throw ValidationError("incomplete model: " + std::to_string(model.pairwise.size()) + " of " +
                          std::to_string(pair_count(n)) + " pair classifiers");
  }
  OutcomeCache cache(n, [&](std::size_t a, std::size_t b) {
    return model.pair(a, b).score(sample, model.config) > 0.0 ? b : a;
  });
  if (scheme.kind == VotingKind::hierarchical) {
    const auto r = vote_hierarchical(n, scheme.survivors, cache.as_function());
    out.label = r.winner;
    out.tally = r.final_tally;
  } else {
    const auto r = vote_all_vs_all(n, cache.as_function());
    out.label = r.winner;
    out.tally = r.tally;
  }
  return out;
}

}  // namespace phoneboost::multiclass
