#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "phoneboost/spectrogram.hpp"
#include "phoneboost/svm.hpp"

namespace phoneboost::hog {

inline constexpr std::size_t kBins = 9;
/// Added to the distance from the patch centre before dividing by it (cells).
inline constexpr double kCenterEpsilon = 0.5;

struct HogPatch {
  std::size_t band = 0;
  std::size_t column = 0;
  std::size_t width = 2;   ///< columns
  std::size_t height = 2;  ///< bands

  bool fits(std::size_t bands, std::size_t columns) const {
    return width > 0 && height > 0 && band + height <= bands && column + width <= columns;
  }
  friend bool operator==(const HogPatch&, const HogPatch&) = default;
};

using HogHistogram = std::array<double, kBins>;

/// Bin of the direction atan2(dy, dx) taken in [0, 2 pi), in 9 equal sectors.
std::size_t orientation_bin(double dx, double dy);

/// Unnormalized histogram. Every patch pixel whose four neighbours lie inside
/// the image contributes |(dx, dy)| / (distance to patch centre + 0.5) to the
/// bin of its gradient direction, with central differences
///   dx = S(b, c+1) - S(b, c-1),  dy = S(b+1, c) - S(b-1, c).
/// Throws InvalidArgument when the patch is out of bounds or has no such pixel.
HogHistogram raw_histogram(const Spectrogram& s, const HogPatch& patch);

/// Divides by the largest bin; an all-zero histogram is left as is.
void normalize_max(HogHistogram& h);

/// raw_histogram followed by normalize_max.
HogHistogram hog_histogram(const Spectrogram& s, const HogPatch& patch);

/// Every patch of shape (t,t), (2t,t), (t,2t) (width, height) for even
/// t >= 2 that is strictly smaller than the image in both dimensions, at
/// every origin. Order: t, shape, band, column.
std::vector<HogPatch> enumerate_hog(std::size_t bands, std::size_t columns);

struct HogSvmFeature {
  HogPatch patch;
  std::array<double, kBins> weights{};
  double bias = 0.0;

  double apply(const HogHistogram& h) const;
};

/// Linear SVM on histograms: positives map to +1, negatives to -1. C = 1 by
/// default. Throws InvalidArgument if either class is empty.
HogSvmFeature train_patch_svm(const HogPatch& patch, const std::vector<HogHistogram>& positives,
                              const std::vector<HogHistogram>& negatives, const svm::Options& options = {});

/// Raw SVM output on the patch histogram (not its sign).
double eval_hog_feature(const HogSvmFeature& f, const Spectrogram& s);

enum class Pooling { avg, max };

std::string_view to_string(Pooling p);
Pooling parse_pooling(std::string_view name);

/// Column origins pooled for a patch defined at column t on a standard length
/// of T0 columns when the sample has T1 columns: floor(t T1/T0) - 1 through
/// ceil(t T1/T0), clamped so the patch stays inside. Just {t} when T1 == T0.
std::vector<std::size_t> pooled_columns(std::size_t t, std::size_t width, std::size_t standard_columns,
                                        std::size_t sample_columns);

/// Bin-wise average or maximum of normalized histograms over pooled_columns.
/// Throws InvalidArgument when the sample is shorter than standard_columns.
HogHistogram pooled_histogram(const Spectrogram& s, const HogPatch& patch, std::size_t standard_columns, Pooling mode);

/// SVM applied to pooled_histogram.
double pooled_hog_feature(const HogSvmFeature& f, const Spectrogram& s, std::size_t standard_columns, Pooling mode);

/// "hog <band> <column> <width> <height> <w0> ... <w8> <bias>"
std::string serialize(const HogSvmFeature& f);
HogSvmFeature parse_hog(std::string_view line);

}  // namespace phoneboost::hog
