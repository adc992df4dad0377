#include "phoneboost/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "phoneboost/error.hpp"
#include "phoneboost/random.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost::eval {

namespace {

void require_nonempty(std::span<const Prediction> preds) {
  if (preds.empty()) throw InvalidArgument("no predictions to score");
}

std::size_t count_equivalent(std::span<const Prediction> preds, const PhoneSet& set) {
  std::size_t ok = 0;
  for (const auto& p : preds) {
    ok += set.scoring_equivalent(set.index_of(p.truth), set.index_of(p.predicted)) ? 1 : 0;
  }
  return ok;
}

}  // namespace

double accuracy(std::span<const Prediction> preds, const PhoneSet& phone_set) {
  require_nonempty(preds);
  return static_cast<double>(count_equivalent(preds, phone_set)) / static_cast<double>(preds.size());
}

double raw_accuracy(std::span<const Prediction> preds, const PhoneSet& phone_set) {
  require_nonempty(preds);
  std::size_t ok = 0;
  for (const auto& p : preds) ok += phone_set.index_of(p.truth) == phone_set.index_of(p.predicted) ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(preds.size());
}

double error_rate(std::span<const Prediction> preds, const PhoneSet& phone_set) {
  require_nonempty(preds);
  const std::size_t wrong = preds.size() - count_equivalent(preds, phone_set);
  return static_cast<double>(wrong) / static_cast<double>(preds.size());
}

ConfusionMatrix::ConfusionMatrix(PhoneSet phone_set)
    : phone_set_(std::move(phone_set)), counts_(phone_set_.size() * phone_set_.size(), 0) {}

void ConfusionMatrix::add(std::string_view truth, std::string_view predicted) {
  ++counts_[phone_set_.index_of(truth) * size() + phone_set_.index_of(predicted)];
}

std::size_t ConfusionMatrix::row_total(std::size_t truth) const {
  std::size_t t = 0;
  for (std::size_t j = 0; j < size(); ++j) t += count(truth, j);
  return t;
}

std::size_t ConfusionMatrix::total() const { return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0}); }

double ConfusionMatrix::frequency(std::size_t truth, std::size_t predicted) const {
  const std::size_t t = row_total(truth);
  return t ? static_cast<double>(count(truth, predicted)) / static_cast<double>(t) : 0.0;
}

std::vector<std::pair<std::size_t, std::size_t>> ConfusionMatrix::ranked_row(std::size_t truth) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t j = 0; j < size(); ++j) {
    if (count(truth, j)) out.emplace_back(j, count(truth, j));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  return out;
}

ConfusionMatrix confusion(std::span<const Prediction> preds, const PhoneSet& phone_set) {
  ConfusionMatrix m(phone_set);
  for (const auto& p : preds) m.add(p.truth, p.predicted);
  return m;
}

BlockMass confusion_block_mass(const ConfusionMatrix& m, std::span<const std::size_t> category_of) {
  if (category_of.size() != m.size()) throw InvalidArgument("category list must cover every phone");
  BlockMass b;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (i == j) continue;
      (category_of[i] == category_of[j] ? b.within : b.across) += m.count(i, j);
    }
  }
  return b;
}

ExperimentReport accuracy_report(std::span<const Prediction> preds, const PhoneSet& phone_set) {
  ExperimentReport r;
  r.kind = "accuracy";
  r.add_metric("accuracy", accuracy(preds, phone_set));
  r.add_metric("raw_accuracy", raw_accuracy(preds, phone_set));
  return r;
}

ExperimentReport confusion_report(const ConfusionMatrix& m) {
  ExperimentReport r;
  r.kind = "confusion";
  Table t;
  t.name = "confusion";
  t.columns = m.phone_set().labels();
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::vector<double> row(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) row[j] = static_cast<double>(m.count(i, j));
    t.rows.emplace_back(m.phone_set().labels()[i], std::move(row));
  }
  r.tables.push_back(std::move(t));
  return r;
}

BinaryData binary_data(const multiclass::PreparedCorpus& corpus, std::size_t a, std::size_t b) {
  BinaryData d;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    if (corpus.labels[i] == a) d.negatives.push_back(&corpus.samples[i]);
    else if (corpus.labels[i] == b) d.positives.push_back(&corpus.samples[i]);
  }
  return d;
}

double binary_error(const multiclass::PairClassifier& c, const PipelineConfig& config, const BinaryData& data,
                    std::size_t max_rounds) {
  if (data.size() == 0) throw InvalidArgument("no samples to score");
  std::size_t wrong = 0;
  for (const auto* s : data.negatives) wrong += c.score(*s, config, max_rounds) > 0.0 ? 1 : 0;
  for (const auto* s : data.positives) wrong += c.score(*s, config, max_rounds) > 0.0 ? 0 : 1;
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

namespace {

// Per-sample scores of every prefix, computed in one pass over the rounds.
std::vector<double> prefix_errors(const multiclass::PairClassifier& c, const PipelineConfig& config,
                                  const BinaryData& data) {
  const std::size_t m = c.strong.rounds.size();
  std::vector<std::size_t> wrong(m, 0);
  auto accumulate = [&](const PreparedSample* s, int label) {
    const auto values = c.feature_values(*s, config);
    double score = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const auto& r = c.strong.rounds[k];
      score += r.weight * r.stump.output(values[r.stump.feature_index]);
      if (boosting::sign_label(score) != label) ++wrong[k];
    }
  };
  for (const auto* s : data.negatives) accumulate(s, -1);
  for (const auto* s : data.positives) accumulate(s, +1);
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = static_cast<double>(wrong[k]) / static_cast<double>(data.size());
  return out;
}

std::vector<const PreparedSample*> draw(const std::vector<const PreparedSample*>& pool, std::size_t n, Rng& rng) {
  std::vector<const PreparedSample*> shuffled = pool;
  rng.shuffle(std::span(shuffled));
  shuffled.resize(n);
  return shuffled;
}

struct PairIndices {
  std::size_t a;
  std::size_t b;
};

PairIndices resolve_pair(const PhoneSet& set, const PairSpec& pair) {
  const std::size_t a = set.index_of(pair.a);
  const std::size_t b = set.index_of(pair.b);
  if (a == b) throw InvalidArgument("pair needs two different phones");
  return {a, b};
}

}  // namespace

ExperimentReport rounds_curve(const multiclass::PairClassifier& c, const PipelineConfig& config,
                              const BinaryData& train, const BinaryData& test) {
  if (c.strong.rounds.empty()) throw InvalidArgument("rounds curve needs a nonempty classifier");
  ExperimentReport r;
  r.kind = "rounds";
  const std::size_t m = c.strong.rounds.size();
  std::vector<double> x(m);
  std::iota(x.begin(), x.end(), 1.0);
  r.series.push_back({"train", x, prefix_errors(c, config, train)});
  r.series.push_back({"test", x, prefix_errors(c, config, test)});
  r.add_metric("final_train_error", r.series[0].y.back());
  r.add_metric("final_test_error", r.series[1].y.back());
  return r;
}

std::vector<CorpusItem> pair_items(const Corpus& corpus, const PairSpec& pair) {
  std::vector<CorpusItem> out;
  for (const auto& item : corpus.items) {
    if (item.segment.label == pair.a || item.segment.label == pair.b) out.push_back(item);
  }
  return out;
}

ExperimentReport learning_curve(const PipelineConfig& config, const Corpus& train, const Corpus& test,
                                const PairSpec& pair, std::span<const std::size_t> sizes, std::size_t trials) {
  if (sizes.empty()) throw InvalidArgument("learning curve needs at least one size");
  if (trials == 0) throw InvalidArgument("learning curve needs at least one trial");
  if (!std::is_sorted(sizes.begin(), sizes.end()) || sizes.front() == 0) {
    throw InvalidArgument("learning curve sizes must be positive and ascending");
  }
  const auto [a, b] = resolve_pair(train.phone_set, pair);
  const auto train_items = pair_items(train, pair);
  const auto test_items = pair_items(test, pair);
  if (train_items.empty() || test_items.empty()) throw ValidationError("pair has no training or test samples");
  const FeaturePipeline pipeline = FeaturePipeline::fit(config, train_items);
  const auto train_corpus = multiclass::prepare_corpus(pipeline, train.phone_set, train_items);
  const auto test_corpus = multiclass::prepare_corpus(pipeline, test.phone_set, test_items);
  const BinaryData pool = binary_data(train_corpus, a, b);
  const BinaryData test_data = binary_data(test_corpus, a, b);

  const std::size_t need = sizes.back();
  std::string shortfall;
  if (pool.negatives.size() < need) {
    shortfall += " '" + pair.a + "' has " + std::to_string(pool.negatives.size()) + " (short by " +
                 std::to_string(need - pool.negatives.size()) + ")";
  }
  if (pool.positives.size() < need) {
    shortfall += " '" + pair.b + "' has " + std::to_string(pool.positives.size()) + " (short by " +
                 std::to_string(need - pool.positives.size()) + ")";
  }
  if (!shortfall.empty()) {
    throw ValidationError("learning curve needs " + std::to_string(need) + " training samples per class:" + shortfall);
  }

  ExperimentReport r;
  r.kind = "learning";
  Series mean{"test_error", {}, {}};
  Series se{"test_error_se", {}, {}};
  Series train_mean{"train_error", {}, {}};
  for (std::size_t size : sizes) {
    std::vector<double> errors;
    double train_total = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(derive_seed(config.seed, size, t));
      BinaryData subset;
      subset.negatives = draw(pool.negatives, size, rng);
      subset.positives = draw(pool.positives, size, rng);
      const auto c = multiclass::train_binary(pipeline, subset.negatives, subset.positives, pair.a, pair.b,
                                              derive_seed(config.seed, size, t + 1));
      errors.push_back(binary_error(c, config, test_data));
      train_total += binary_error(c, config, subset);
    }
    const double m = std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(trials);
    double var = 0.0;
    for (double e : errors) var += (e - m) * (e - m);
    const double s = trials > 1 ? std::sqrt(var / static_cast<double>(trials - 1) / static_cast<double>(trials)) : 0.0;
    const double x = static_cast<double>(size);
    mean.x.push_back(x);
    mean.y.push_back(m);
    se.x.push_back(x);
    se.y.push_back(s);
    train_mean.x.push_back(x);
    train_mean.y.push_back(train_total / static_cast<double>(trials));
  }
  r.series = {mean, se, train_mean};
  r.add_metric("trials", static_cast<double>(trials));
  return r;
}

ExperimentReport margin_sweep(const PipelineConfig& config, const Corpus& train, const Corpus& test,
                              const PairSpec& pair, std::span<const double> margins) {
  if (margins.empty()) throw InvalidArgument("margin sweep needs at least one margin");
  const auto [a, b] = resolve_pair(train.phone_set, pair);
  const auto train_items = pair_items(train, pair);
  const auto test_items = pair_items(test, pair);
  if (train_items.empty() || test_items.empty()) throw ValidationError("pair has no training or test samples");

  ExperimentReport r;
  r.kind = "margins";
  Table table{"margins", {"margin", "train_error", "test_error"}, {}};
  Series train_series{"train", {}, {}};
  Series test_series{"test", {}, {}};
  for (double m : margins) {
    PipelineConfig c = config;
    c.length_mode = LengthMode::margins;
    c.margin = m;
    c.validate();
    const FeaturePipeline pipeline = FeaturePipeline::fit(c, train_items);
    const auto train_corpus = multiclass::prepare_corpus(pipeline, train.phone_set, train_items);
    const auto test_corpus = multiclass::prepare_corpus(pipeline, test.phone_set, test_items);
    const auto train_data = binary_data(train_corpus, a, b);
    const auto test_data = binary_data(test_corpus, a, b);
    const auto clf = multiclass::train_pairwise(pipeline, train_corpus, a, b);
    const double train_error = binary_error(clf, c, train_data);
    const double test_error = binary_error(clf, c, test_data);
    table.rows.emplace_back(text::format_double(m), std::vector<double>{m, train_error, test_error});
    train_series.x.push_back(m);
    train_series.y.push_back(train_error);
    test_series.x.push_back(m);
    test_series.y.push_back(test_error);
  }
  r.tables.push_back(std::move(table));
  r.series = {train_series, test_series};
  return r;
}

}  // namespace phoneboost::eval
