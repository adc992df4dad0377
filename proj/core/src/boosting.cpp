#include "phoneboost/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "phoneboost/error.hpp"
#include "phoneboost/parallel.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost::boosting {

std::string_view to_string(Mode mode) { return mode == Mode::discrete ? "discrete" : "gentle"; }

Mode parse_mode(std::string_view name) {
  if (name == "discrete") return Mode::discrete;
  if (name == "gentle") return Mode::gentle;
  throw ValidationError("unknown boosting mode '" + std::string(name) + "'");
}

Stump discrete_stump(std::size_t feature, double threshold, int polarity) {
  Stump s;
  s.feature_index = feature;
  s.threshold = threshold;
  s.polarity = polarity >= 0 ? 1 : -1;
  s.above = s.polarity;
  s.below = -s.polarity;
  return s;
}

double StrongClassifier::score(std::span<const double> features, std::size_t max_rounds) const {
  const std::size_t m = std::min(max_rounds, rounds.size());
  double total = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const Round& round = rounds[r];
    if (round.stump.feature_index >= features.size()) {
      throw InvalidArgument("stump references feature " + std::to_string(round.stump.feature_index) +
                            " but only " + std::to_string(features.size()) + " values were given");
    }
    total += round.weight * round.stump.output(features[round.stump.feature_index]);
  }
  return total;
}

int StrongClassifier::classify(std::span<const double> features, std::size_t max_rounds) const {
  return sign_label(score(features, max_rounds));
}

namespace {

constexpr std::string_view kHeader = "phoneboost-strong 1";

std::vector<std::string> expect_fields(std::span<const std::string> lines, std::size_t index,
                                       std::string_view key, std::size_t count) {
  if (index >= lines.size()) throw FormatError("classifier record truncated before '" + std::string(key) + "'");
  auto fields = text::split_whitespace(lines[index]);
  if (fields.empty() || fields[0] != key || fields.size() != count + 1) {
    throw FormatError("classifier record: expected '" + std::string(key) + "' with " + std::to_string(count) +
                      " fields, got '" + lines[index] + "'");
  }
  return fields;
}

}  // namespace

std::string serialize(const StrongClassifier& c) {
  std::string out(kHeader);
  out += "\nmode ";
  out += to_string(c.mode);
  out += "\nlabels " + c.negative_label + " " + c.positive_label;
  out += "\nrounds " + std::to_string(c.rounds.size()) + "\n";
  for (const Round& r : c.rounds) {
    out += "round " + std::to_string(r.stump.feature_index) + " " + text::format_double(r.stump.threshold) + " " +
           std::to_string(r.stump.polarity) + " " + text::format_double(r.stump.above) + " " +
           text::format_double(r.stump.below) + " " + text::format_double(r.weight) + "\n";
  }
  return out;
}

StrongClassifier parse_strong_classifier(std::span<const std::string> lines) {
  if (lines.empty() || text::trim(lines[0]) != kHeader) {
    throw FormatError("classifier record: missing header '" + std::string(kHeader) + "'");
  }
  StrongClassifier c;
  c.mode = parse_mode(expect_fields(lines, 1, "mode", 1)[1]);
  auto labels = expect_fields(lines, 2, "labels", 2);
  c.negative_label = labels[1];
  c.positive_label = labels[2];
  const auto count = text::parse_int(expect_fields(lines, 3, "rounds", 1)[1], "round count");
  if (count < 0) throw FormatError("classifier record: negative round count");
  for (long long r = 0; r < count; ++r) {
    auto f = expect_fields(lines, 4 + static_cast<std::size_t>(r), "round", 6);
    Round round;
    const auto index = text::parse_int(f[1], "feature index");
    if (index < 0) throw FormatError("classifier record: negative feature index");
    round.stump.feature_index = static_cast<std::size_t>(index);
    round.stump.threshold = text::parse_double(f[2], "threshold");
    round.stump.polarity = static_cast<int>(text::parse_int(f[3], "polarity"));
    if (round.stump.polarity != 1 && round.stump.polarity != -1) throw FormatError("classifier record: polarity must be +-1");
    round.stump.above = text::parse_double(f[4], "above output");
    round.stump.below = text::parse_double(f[5], "below output");
    round.weight = text::parse_double(f[6], "round weight");
    c.rounds.push_back(round);
  }
  return c;
}

SampleMatrix::SampleMatrix(std::size_t samples, std::size_t features)
    : samples_(samples),
      features_(features),
      values_(samples * features, 0.0),
      labels_(samples, 1),
      weights_(samples, samples ? 1.0 / static_cast<double>(samples) : 0.0) {}

SampleMatrix SampleMatrix::from_rows(const std::vector<std::vector<double>>& rows, std::vector<int> labels) {
  if (rows.size() != labels.size()) throw InvalidArgument("row count and label count differ");
  const std::size_t features = rows.empty() ? 0 : rows.front().size();
  SampleMatrix m(rows.size(), features);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != features) throw InvalidArgument("rows have different lengths");
    for (std::size_t f = 0; f < features; ++f) m.set(i, f, rows[i][f]);
    if (labels[i] != 1 && labels[i] != -1) throw InvalidArgument("labels must be +1 or -1");
  }
  m.labels_ = std::move(labels);
  return m;
}

std::vector<double> SampleMatrix::row(std::size_t sample) const {
  std::vector<double> r(features_);
  for (std::size_t f = 0; f < features_; ++f) r[f] = value(sample, f);
  return r;
}

namespace {

double sentinel_below(double min_value) {
  const double t = min_value - 1.0;
  return t < min_value ? t : std::nextafter(min_value, -std::numeric_limits<double>::infinity());
}

double midpoint(double a, double b) {
  const double t = a + (b - a) / 2.0;
  return (t >= a && t < b) ? t : a;
}

void check_trainable(const SampleMatrix& data) {
  if (data.sample_count() == 0) throw InvalidArgument("cannot fit a stump without samples");
  if (data.feature_count() == 0) throw InvalidArgument("cannot fit a stump without features");
  if (data.labels().size() != data.sample_count() || data.weights().size() != data.sample_count()) {
    throw InvalidArgument("label/weight vectors do not match the sample count");
  }
}

std::vector<std::uint32_t> sorted_order(std::span<const double> column) {
  std::vector<std::uint32_t> order(column.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return column[a] < column[b]; });
  return order;
}

// Scan result before exact recomputation: threshold rank k means the split
// after the k-th sorted sample (k = 0 is the sentinel below everything).
struct Candidate {
  double error = std::numeric_limits<double>::infinity();
  std::size_t split = 0;  // number of samples on the <= side
  int polarity = 1;
};

Candidate scan_discrete(std::span<const double> column, std::span<const std::uint32_t> order,
                        const std::vector<int>& y, std::span<const double> w, double wp, double wn) {
  Candidate best;
  best.error = wn;  // sentinel, polarity +1: everything predicted +1
  best.polarity = 1;
  if (wp < best.error) {
    best.error = wp;
    best.polarity = -1;
  }
  double lp = 0.0, ln = 0.0;
  const std::size_t n = order.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::uint32_t i = order[k];
    if (y[i] > 0) lp += w[i]; else ln += w[i];
    if (column[order[k + 1]] == column[i]) continue;
    const double e_pos = lp + (wn - ln);
    const double e_neg = ln + (wp - lp);
    if (e_pos < best.error) best = {e_pos, k + 1, 1};
    if (e_neg < best.error) best = {e_neg, k + 1, -1};
  }
  return best;
}

double gentle_error(double w_total, double s_le, double w_le, double s_total) {
  const double w_gt = w_total - w_le;
  const double s_gt = s_total - s_le;
  double e = w_total;
  if (w_le > 0.0) e -= s_le * s_le / w_le;
  if (w_gt > 0.0) e -= s_gt * s_gt / w_gt;
  return e;
}

Candidate scan_gentle(std::span<const double> column, std::span<const std::uint32_t> order,
                      const std::vector<int>& y, std::span<const double> w, double w_total, double s_total) {
  Candidate best;
  best.error = gentle_error(w_total, 0.0, 0.0, s_total);
  double s_le = 0.0, w_le = 0.0;
  const std::size_t n = order.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::uint32_t i = order[k];
    w_le += w[i];
    s_le += y[i] * w[i];
    if (column[order[k + 1]] == column[i]) continue;
    const double e = gentle_error(w_total, s_le, w_le, s_total);
    if (e < best.error) best = {e, k + 1, 1};
  }
  return best;
}

double threshold_for(std::span<const double> column, std::span<const std::uint32_t> order, std::size_t split) {
  if (split == 0) return sentinel_below(column[order[0]]);
  return midpoint(column[order[split - 1]], column[order[split]]);
}

StumpFit finish_discrete(const SampleMatrix& data, std::span<const double> weights, std::size_t feature,
                         double threshold, int polarity) {
  StumpFit fit{discrete_stump(feature, threshold, polarity), 0.0};
  auto column = data.feature_column(feature);
  for (std::size_t i = 0; i < data.sample_count(); ++i) {
    if (fit.stump.output(column[i]) != data.labels()[i]) fit.error += weights[i];
  }
  return fit;
}

StumpFit finish_gentle(const SampleMatrix& data, std::span<const double> weights, std::size_t feature,
                       double threshold) {
  auto column = data.feature_column(feature);
  double s_gt = 0, w_gt = 0, s_le = 0, w_le = 0;
  for (std::size_t i = 0; i < data.sample_count(); ++i) {
    const double w = weights[i];
    const double yw = data.labels()[i] * w;
    if (column[i] > threshold) {
      s_gt += yw;
      w_gt += w;
    } else {
      s_le += yw;
      w_le += w;
    }
  }
  StumpFit fit;
  fit.stump.feature_index = feature;
  fit.stump.threshold = threshold;
  fit.stump.polarity = 1;
  fit.stump.above = w_gt > 0.0 ? s_gt / w_gt : 0.0;
  fit.stump.below = w_le > 0.0 ? s_le / w_le : 0.0;
  for (std::size_t i = 0; i < data.sample_count(); ++i) {
    const double r = data.labels()[i] - fit.stump.output(column[i]);
    fit.error += weights[i] * r * r;
  }
  return fit;
}

struct Totals {
  double wp = 0, wn = 0;
  double w() const { return wp + wn; }
  double s() const { return wp - wn; }
};

Totals totals(const std::vector<int>& y, std::span<const double> w) {
  Totals t;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] > 0 ? t.wp : t.wn) += w[i];
  return t;
}

// Presorted orders for all features, reused across rounds.
class StumpSearch {
 public:
  explicit StumpSearch(const SampleMatrix& data) : data_(data), orders_(data.feature_count() * data.sample_count()) {
    parallel_for(data.feature_count(), [&](std::size_t f) {
      auto order = sorted_order(data.feature_column(f));
      std::copy(order.begin(), order.end(), orders_.begin() + static_cast<std::ptrdiff_t>(f * data.sample_count()));
    });
  }

  StumpFit best(Mode mode, std::span<const double> w) const {
    const Totals t = totals(data_.labels(), w);
    struct Best {
      Candidate c;
      std::size_t feature = 0;
    };
    const std::size_t features = data_.feature_count();
    std::vector<Best> per_chunk(std::max<std::size_t>(thread_count(), 1));
    parallel_chunks(
        features,
        [&](std::size_t chunk, std::size_t begin, std::size_t end) {
          Best b;
          for (std::size_t f = begin; f < end; ++f) {
            const Candidate c = mode == Mode::discrete
                                    ? scan_discrete(data_.feature_column(f), order(f), data_.labels(), w, t.wp, t.wn)
                                    : scan_gentle(data_.feature_column(f), order(f), data_.labels(), w, t.w(), t.s());
            if (c.error < b.c.error) b = {c, f};
          }
          per_chunk[chunk] = b;
        },
        per_chunk.size());
    Best overall;
    for (const Best& b : per_chunk) {
      if (b.c.error < overall.c.error) overall = b;
    }
    const double thr = threshold_for(data_.feature_column(overall.feature), order(overall.feature), overall.c.split);
    return mode == Mode::discrete ? finish_discrete(data_, w, overall.feature, thr, overall.c.polarity)
                                  : finish_gentle(data_, w, overall.feature, thr);
  }

 private:
  std::span<const std::uint32_t> order(std::size_t f) const {
    return std::span(orders_).subspan(f * data_.sample_count(), data_.sample_count());
  }

  const SampleMatrix& data_;
  std::vector<std::uint32_t> orders_;
};

void normalize_weights(std::vector<double>& w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) throw Error("boosting weights degenerated (sum " + std::to_string(total) + ")");
  for (double& v : w) v /= total;
}

void check_initial_weights(const SampleMatrix& data) {
  for (double w : data.weights()) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("sample weights must be finite and nonnegative");
  }
}

}  // namespace

StumpFit fit_stump_discrete(const SampleMatrix& data, std::size_t feature) {
  check_trainable(data);
  if (feature >= data.feature_count()) throw InvalidArgument("feature index out of range");
  auto column = data.feature_column(feature);
  auto order = sorted_order(column);
  const Totals t = totals(data.labels(), data.weights());
  const Candidate c = scan_discrete(column, order, data.labels(), data.weights(), t.wp, t.wn);
  return finish_discrete(data, data.weights(), feature, threshold_for(column, order, c.split), c.polarity);
}

StumpFit fit_stump_gentle(const SampleMatrix& data, std::size_t feature) {
  check_trainable(data);
  if (feature >= data.feature_count()) throw InvalidArgument("feature index out of range");
  auto column = data.feature_column(feature);
  auto order = sorted_order(column);
  const Totals t = totals(data.labels(), data.weights());
  const Candidate c = scan_gentle(column, order, data.labels(), data.weights(), t.w(), t.s());
  return finish_gentle(data, data.weights(), feature, threshold_for(column, order, c.split));
}

TrainResult train_discrete(const SampleMatrix& data, std::size_t rounds, const RoundObserver& observer) {
  check_trainable(data);
  check_initial_weights(data);
  TrainResult result;
  result.classifier.mode = Mode::discrete;
  StumpSearch search(data);
  std::vector<double> w = data.weights();
  normalize_weights(w);
  for (std::size_t m = 0; m < rounds; ++m) {
    const StumpFit fit = search.best(Mode::discrete, w);
    double e = 0.0;
    for (std::size_t i = 0; i < data.sample_count(); ++i) {
      if (fit.stump.output(data.value(i, fit.stump.feature_index)) != data.labels()[i]) e += w[i];
    }
    if (e >= 0.5 - 1e-12) {
      result.terminated_early = true;
      break;
    }
    const double ec = std::clamp(e, kErrorClamp, 1.0 - kErrorClamp);
    const double c = std::log((1.0 - ec) / ec);
    const double boost = std::exp(c);
    for (std::size_t i = 0; i < data.sample_count(); ++i) {
      if (fit.stump.output(data.value(i, fit.stump.feature_index)) != data.labels()[i]) w[i] *= boost;
    }
    normalize_weights(w);
    result.classifier.rounds.push_back({fit.stump, c});
    if (observer) observer({m, result.classifier.rounds.back(), e, w});
  }
  return result;
}

TrainResult train_gentle(const SampleMatrix& data, std::size_t rounds, const RoundObserver& observer) {
  check_trainable(data);
  check_initial_weights(data);
  TrainResult result;
  result.classifier.mode = Mode::gentle;
  StumpSearch search(data);
  std::vector<double> w = data.weights();
  normalize_weights(w);
  for (std::size_t m = 0; m < rounds; ++m) {
    const StumpFit fit = search.best(Mode::gentle, w);
    for (std::size_t i = 0; i < data.sample_count(); ++i) {
      w[i] *= std::exp(-data.labels()[i] * fit.stump.output(data.value(i, fit.stump.feature_index)));
    }
    normalize_weights(w);
    result.classifier.rounds.push_back({fit.stump, 1.0});
    if (observer) observer({m, result.classifier.rounds.back(), fit.error, w});
  }
  return result;
}

TrainResult train(const SampleMatrix& data, Mode mode, std::size_t rounds, const RoundObserver& observer) {
  return mode == Mode::discrete ? train_discrete(data, rounds, observer) : train_gentle(data, rounds, observer);
}

double exponential_loss(const StrongClassifier& c, const SampleMatrix& data, std::size_t max_rounds) {
  double loss = 0.0;
  for (std::size_t i = 0; i < data.sample_count(); ++i) {
    const auto row = data.row(i);
    loss += std::exp(-data.labels()[i] * c.score(row, max_rounds));
  }
  return loss;
}

}  // namespace phoneboost::boosting
