#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phoneboost::boosting {

enum class Mode { discrete, gentle };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view name);

/// Single-feature threshold rule: above when x[feature] > threshold, else below.
/// Discrete stumps output +-polarity; gentle stumps output the fitted means.
struct Stump {
  std::size_t feature_index = 0;
  double threshold = 0.0;
  int polarity = 1;
  double above = 1.0;
  double below = -1.0;

  double output(double x) const { return x > threshold ? above : below; }
  friend bool operator==(const Stump&, const Stump&) = default;
};

Stump discrete_stump(std::size_t feature, double threshold, int polarity);

struct Round {
  Stump stump;
  double weight = 1.0;  ///< c_m for discrete rounds, 1 for gentle rounds
  friend bool operator==(const Round&, const Round&) = default;
};

struct StrongClassifier {
  Mode mode = Mode::gentle;
  std::vector<Round> rounds;
  std::string negative_label;  ///< class scored as -1
  std::string positive_label;  ///< class scored as +1

  static constexpr std::size_t kAllRounds = std::numeric_limits<std::size_t>::max();

  /// Sum of weight * stump output over the first max_rounds rounds. Throws
  /// InvalidArgument if a stump references a feature beyond `features`.
  double score(std::span<const double> features, std::size_t max_rounds = kAllRounds) const;
  /// +1 or -1; a zero score maps to -1.
  int classify(std::span<const double> features, std::size_t max_rounds = kAllRounds) const;

  friend bool operator==(const StrongClassifier&, const StrongClassifier&) = default;
};

inline int sign_label(double score) { return score > 0.0 ? 1 : -1; }

/// Versioned text record: header, mode, labels, round count, one line per round.
std::string serialize(const StrongClassifier& c);
/// Parses the record produced by serialize. `lines` must start at the header.
StrongClassifier parse_strong_classifier(std::span<const std::string> lines);

/// Feature values stored feature-major (one contiguous column per feature),
/// labels in {-1, +1}, and nonnegative sample weights (uniform at creation).
class SampleMatrix {
 public:
  SampleMatrix() = default;
  SampleMatrix(std::size_t samples, std::size_t features);
  static SampleMatrix from_rows(const std::vector<std::vector<double>>& rows, std::vector<int> labels);

  std::size_t sample_count() const { return samples_; }
  std::size_t feature_count() const { return features_; }

  double value(std::size_t sample, std::size_t feature) const { return values_[feature * samples_ + sample]; }
  void set(std::size_t sample, std::size_t feature, double v) { values_[feature * samples_ + sample] = v; }
  std::span<const double> feature_column(std::size_t feature) const {
    return std::span(values_).subspan(feature * samples_, samples_);
  }
  std::span<double> feature_column(std::size_t feature) {
    return std::span(values_).subspan(feature * samples_, samples_);
  }
  std::vector<double> row(std::size_t sample) const;

  std::vector<int>& labels() { return labels_; }
  const std::vector<int>& labels() const { return labels_; }
  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::size_t samples_ = 0;
  std::size_t features_ = 0;
  std::vector<double> values_;
  std::vector<int> labels_;
  std::vector<double> weights_;
};

struct StumpFit {
  Stump stump;
  double error = 0.0;  ///< weighted 0/1 error (discrete) or weighted squared error (gentle)
};

/// Threshold and polarity minimizing the weighted 0/1 error on one feature.
/// Candidates: one threshold below the minimum and the midpoints between
/// consecutive distinct values. Ties go to the smaller threshold, then to
/// polarity +1.
StumpFit fit_stump_discrete(const SampleMatrix& data, std::size_t feature);

/// Weighted least-squares stump: branch outputs are the weighted means of y on
/// each side (0 for an empty side); the threshold minimizes the weighted
/// squared residual. Same candidates and tie rule as the discrete fit.
StumpFit fit_stump_gentle(const SampleMatrix& data, std::size_t feature);

/// e_m is clamped to [kErrorClamp, 1 - kErrorClamp] before computing c_m.
inline constexpr double kErrorClamp = 1e-10;

struct RoundInfo {
  std::size_t round = 0;
  Round chosen;
  double error = 0.0;
  std::span<const double> weights;  ///< sample weights after this round's update
};
using RoundObserver = std::function<void(const RoundInfo&)>;

struct TrainResult {
  StrongClassifier classifier;
  /// Discrete only: no stump reached weighted error below 0.5.
  bool terminated_early = false;
};

/// Discrete AdaBoost: each round takes the minimum-error stump over all
/// features (ties: lowest feature index, then lowest threshold), sets
/// c = log((1 - e)/e), multiplies misclassified weights by exp(c) and
/// renormalizes. Stops before a round whose best error is >= 0.5.
TrainResult train_discrete(const SampleMatrix& data, std::size_t rounds, const RoundObserver& observer = {});

/// Gentle AdaBoost: each round adds the weighted least-squares stump f and
/// updates w_i <- w_i exp(-y_i f(x_i)), then renormalizes.
TrainResult train_gentle(const SampleMatrix& data, std::size_t rounds, const RoundObserver& observer = {});

TrainResult train(const SampleMatrix& data, Mode mode, std::size_t rounds, const RoundObserver& observer = {});

/// sum_i exp(-y_i F(x_i)) for the classifier's score F.
double exponential_loss(const StrongClassifier& c, const SampleMatrix& data, std::size_t max_rounds = StrongClassifier::kAllRounds);

}  // namespace phoneboost::boosting
