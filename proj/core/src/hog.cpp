#include "phoneboost/hog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phoneboost/error.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost::hog {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSector = kTwoPi / static_cast<double>(kBins);

std::string describe(const HogPatch& p) {
  return std::to_string(p.width) + "x" + std::to_string(p.height) + " patch at (" + std::to_string(p.band) + "," +
         std::to_string(p.column) + ")";
}

}  // namespace

std::size_t orientation_bin(double dx, double dy) {
  double angle = std::atan2(dy, dx);
  if (angle < 0.0) angle += kTwoPi;
  const auto bin = static_cast<std::size_t>(std::floor(angle / kSector));
  return std::min(bin, kBins - 1);
}

HogHistogram raw_histogram(const Spectrogram& s, const HogPatch& patch) {
  if (!patch.fits(s.bands(), s.columns())) {
    throw InvalidArgument(describe(patch) + " does not fit a " + std::to_string(s.bands()) + "x" +
                          std::to_string(s.columns()) + " spectrogram");
  }
  const std::size_t b0 = std::max<std::size_t>(patch.band, 1);
  const std::size_t b1 = std::min(patch.band + patch.height, s.bands() - 1);
  const std::size_t c0 = std::max<std::size_t>(patch.column, 1);
  const std::size_t c1 = std::min(patch.column + patch.width, s.columns() - 1);
  if (b0 >= b1 || c0 >= c1) throw InvalidArgument(describe(patch) + " has no pixel with in-image neighbours");

  const double center_b = static_cast<double>(patch.band) + (static_cast<double>(patch.height) - 1.0) / 2.0;
  const double center_c = static_cast<double>(patch.column) + (static_cast<double>(patch.width) - 1.0) / 2.0;
  HogHistogram h{};
  for (std::size_t b = b0; b < b1; ++b) {
    for (std::size_t c = c0; c < c1; ++c) {
      const double dx = s(b, c + 1) - s(b, c - 1);
      const double dy = s(b + 1, c) - s(b - 1, c);
      const double magnitude = std::hypot(dx, dy);
      if (magnitude == 0.0) continue;
      const double distance = std::hypot(static_cast<double>(b) - center_b, static_cast<double>(c) - center_c);
      h[orientation_bin(dx, dy)] += magnitude / (distance + kCenterEpsilon);
    }
  }
  return h;
}

void normalize_max(HogHistogram& h) {
  const double peak = *std::max_element(h.begin(), h.end());
  if (peak <= 0.0) return;
  for (double& v : h) v /= peak;
}

HogHistogram hog_histogram(const Spectrogram& s, const HogPatch& patch) {
  HogHistogram h = raw_histogram(s, patch);
  normalize_max(h);
  return h;
}

std::vector<HogPatch> enumerate_hog(std::size_t bands, std::size_t columns) {
  std::vector<HogPatch> patches;
  for (std::size_t t = 2; t < std::max(bands, columns); t += 2) {
    const std::array<std::pair<std::size_t, std::size_t>, 3> shapes{{{t, t}, {2 * t, t}, {t, 2 * t}}};
    for (const auto& [w, h] : shapes) {
      if (w >= columns || h >= bands) continue;
      for (std::size_t b = 0; b + h <= bands; ++b) {
        for (std::size_t c = 0; c + w <= columns; ++c) patches.push_back(HogPatch{b, c, w, h});
      }
    }
  }
  return patches;
}

double HogSvmFeature::apply(const HogHistogram& h) const {
  double acc = bias;
  for (std::size_t i = 0; i < kBins; ++i) acc += weights[i] * h[i];
  return acc;
}

HogSvmFeature train_patch_svm(const HogPatch& patch, const std::vector<HogHistogram>& positives,
                              const std::vector<HogHistogram>& negatives, const svm::Options& options) {
  if (positives.empty() || negatives.empty()) throw InvalidArgument("patch SVM needs samples of both classes");
  std::vector<double> rows;
  std::vector<int> labels;
  rows.reserve((positives.size() + negatives.size()) * kBins);
  for (const auto& h : positives) {
    rows.insert(rows.end(), h.begin(), h.end());
    labels.push_back(1);
  }
  for (const auto& h : negatives) {
    rows.insert(rows.end(), h.begin(), h.end());
    labels.push_back(-1);
  }
  const auto model = svm::train_linear_svm(rows, kBins, labels, options);
  HogSvmFeature f;
  f.patch = patch;
  std::copy(model.weights.begin(), model.weights.end(), f.weights.begin());
  f.bias = model.bias;
  return f;
}

double eval_hog_feature(const HogSvmFeature& f, const Spectrogram& s) { return f.apply(hog_histogram(s, f.patch)); }

std::string_view to_string(Pooling p) { return p == Pooling::avg ? "avg" : "max"; }

Pooling parse_pooling(std::string_view name) {
  if (name == "avg") return Pooling::avg;
  if (name == "max") return Pooling::max;
  throw FormatError("unknown pooling mode '" + std::string(name) + "' (expected avg or max)");
}

std::vector<std::size_t> pooled_columns(std::size_t t, std::size_t width, std::size_t standard_columns,
                                        std::size_t sample_columns) {
  if (sample_columns < standard_columns) {
    throw InvalidArgument("sample has " + std::to_string(sample_columns) + " columns, fewer than the standard " +
                          std::to_string(standard_columns));
  }
  if (width > sample_columns) throw InvalidArgument("patch wider than the sample");
  const std::size_t last_origin = sample_columns - width;
  if (sample_columns == standard_columns) return {std::min(t, last_origin)};
  const std::size_t scaled = t * sample_columns;
  const std::size_t lo_floor = scaled / standard_columns;
  const std::size_t hi = (scaled + standard_columns - 1) / standard_columns;
  const std::size_t lo = lo_floor == 0 ? 0 : lo_floor - 1;
  std::vector<std::size_t> cols;
  for (std::size_t c = lo; c <= hi; ++c) {
    const std::size_t clamped = std::min(c, last_origin);
    if (cols.empty() || cols.back() != clamped) cols.push_back(clamped);
  }
  return cols;
}

HogHistogram pooled_histogram(const Spectrogram& s, const HogPatch& patch, std::size_t standard_columns, Pooling mode) {
  const auto cols = pooled_columns(patch.column, patch.width, standard_columns, s.columns());
  HogHistogram pooled{};
  for (std::size_t i = 0; i < cols.size(); ++i) {
    HogPatch shifted = patch;
    shifted.column = cols[i];
    const HogHistogram h = hog_histogram(s, shifted);
    for (std::size_t k = 0; k < kBins; ++k) {
      if (mode == Pooling::avg) {
        pooled[k] += h[k];
      } else {
        pooled[k] = i == 0 ? h[k] : std::max(pooled[k], h[k]);
      }
    }
  }
  if (mode == Pooling::avg) {
    for (double& v : pooled) v /= static_cast<double>(cols.size());
  }
  return pooled;
}

double pooled_hog_feature(const HogSvmFeature& f, const Spectrogram& s, std::size_t standard_columns, Pooling mode) {
  return f.apply(pooled_histogram(s, f.patch, standard_columns, mode));
}

std::string serialize(const HogSvmFeature& f) {
  std::string out = "hog " + std::to_string(f.patch.band) + " " + std::to_string(f.patch.column) + " " +
                    std::to_string(f.patch.width) + " " + std::to_string(f.patch.height);
  for (const double w : f.weights) out += " " + text::format_double(w);
  out += " " + text::format_double(f.bias);
  return out;
}

HogSvmFeature parse_hog(std::string_view line) {
  const auto tokens = text::split_whitespace(line);
  if (tokens.size() != 5 + kBins + 1 || tokens[0] != "hog") {
    throw FormatError("malformed HoG descriptor '" + std::string(line) + "'");
  }
  const auto field = [&](std::size_t i, const char* name) {
    const long long v = text::parse_int(tokens[i], name);
    if (v < 0) throw FormatError(std::string("negative ") + name + " in HoG descriptor");
    return static_cast<std::size_t>(v);
  };
  HogSvmFeature f;
  f.patch = HogPatch{field(1, "band"), field(2, "column"), field(3, "width"), field(4, "height")};
  for (std::size_t k = 0; k < kBins; ++k) f.weights[k] = text::parse_double(tokens[5 + k], "HoG weight");
  f.bias = text::parse_double(tokens[5 + kBins], "HoG bias");
  return f;
}

}  // namespace phoneboost::hog
