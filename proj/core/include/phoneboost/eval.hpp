#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phoneboost/config.hpp"
#include "phoneboost/corpus.hpp"
#include "phoneboost/multiclass.hpp"
#include "phoneboost/phone_set.hpp"

namespace phoneboost::eval {

struct Prediction {
  std::string truth;
  std::string predicted;
};

/// Fraction of predictions scoring-equivalent to the truth. Throws
/// InvalidArgument on an empty list, ValidationError on unknown labels.
double accuracy(std::span<const Prediction> preds, const PhoneSet& phone_set);
/// Fraction of exact label matches.
double raw_accuracy(std::span<const Prediction> preds, const PhoneSet& phone_set);
/// 1 - accuracy, counted directly from the errors.
double error_rate(std::span<const Prediction> preds, const PhoneSet& phone_set);

/// Raw (unmerged) counts indexed by (true phone, predicted phone).
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(PhoneSet phone_set);

  void add(std::string_view truth, std::string_view predicted);
  std::size_t size() const { return phone_set_.size(); }
  const PhoneSet& phone_set() const { return phone_set_; }
  std::size_t count(std::size_t truth, std::size_t predicted) const { return counts_[truth * size() + predicted]; }
  std::size_t row_total(std::size_t truth) const;
  std::size_t total() const;
  /// count / row_total, or 0 for an empty row.
  double frequency(std::size_t truth, std::size_t predicted) const;
  /// Predicted labels of a row, most frequent first (ties by label order), zero counts omitted.
  std::vector<std::pair<std::size_t, std::size_t>> ranked_row(std::size_t truth) const;

 private:
  PhoneSet phone_set_;
  std::vector<std::size_t> counts_;
};

ConfusionMatrix confusion(std::span<const Prediction> preds, const PhoneSet& phone_set);

/// Off-diagonal mass split by whether truth and prediction share a category.
struct BlockMass {
  std::size_t within = 0;
  std::size_t across = 0;
};
BlockMass confusion_block_mass(const ConfusionMatrix& m, std::span<const std::size_t> category_of);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;  ///< value column names (the row label column is implicit)
  std::vector<std::pair<std::string, std::vector<double>>> rows;
};

/// Named scalar metrics, curve series and tables.
struct ExperimentReport {
  std::string kind;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<Series> series;
  std::vector<Table> tables;

  void add_metric(std::string name, double value) { metrics.emplace_back(std::move(name), value); }
  /// Throws InvalidArgument when absent.
  double metric(std::string_view name) const;
  const Series& find_series(std::string_view label) const;
  const Table& find_table(std::string_view name) const;
  /// Throws ValidationError when a series has unequal x/y lengths or a table
  /// row has the wrong number of values.
  void validate() const;
};

/// Line-oriented text: header, "kind", then metric/series/table blocks.
std::string to_text(const ExperimentReport& r);
ExperimentReport parse_report(std::string_view text);
/// Comma-separated sections (metrics, one per series, one per table)
/// separated by blank lines.
std::string to_csv(const ExperimentReport& r);
/// CSV when the path ends in .csv, text otherwise.
void write_report(const std::filesystem::path& path, const ExperimentReport& r);

ExperimentReport accuracy_report(std::span<const Prediction> preds, const PhoneSet& phone_set);
ExperimentReport confusion_report(const ConfusionMatrix& m);

/// Samples of a two-class problem: negatives are scored -1, positives +1.
struct BinaryData {
  std::vector<const PreparedSample*> negatives;
  std::vector<const PreparedSample*> positives;
  std::size_t size() const { return negatives.size() + positives.size(); }
};

BinaryData binary_data(const multiclass::PreparedCorpus& corpus, std::size_t a, std::size_t b);

/// Misclassification rate of a binary classifier using its first max_rounds rounds.
double binary_error(const multiclass::PairClassifier& c, const PipelineConfig& config, const BinaryData& data,
                    std::size_t max_rounds = boosting::StrongClassifier::kAllRounds);

/// Train and test error for every prefix length 1..M (series "train", "test").
ExperimentReport rounds_curve(const multiclass::PairClassifier& c, const PipelineConfig& config,
                              const BinaryData& train, const BinaryData& test);

struct PairSpec {
  std::string a;
  std::string b;
};

/// Per size: mean test error over `trials` classifiers, each trained on
/// `size` samples per class drawn without replacement from the training
/// split (seeded per size and trial), tested on the full test split. The
/// pipeline is fitted once on the pair's full training split.
ExperimentReport learning_curve(const PipelineConfig& config, const Corpus& train, const Corpus& test,
                                const PairSpec& pair, std::span<const std::size_t> sizes, std::size_t trials);

/// Per margin: train/test error of the pair in margins mode.
ExperimentReport margin_sweep(const PipelineConfig& config, const Corpus& train, const Corpus& test,
                              const PairSpec& pair, std::span<const double> margins);

/// Items of `corpus` whose label is one of the pair's phones.
std::vector<CorpusItem> pair_items(const Corpus& corpus, const PairSpec& pair);

}  // namespace phoneboost::eval
