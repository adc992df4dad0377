#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phoneboost/spectrogram.hpp"

namespace phoneboost::haar {

/// Summed-area table over a spectrogram. Entries are kept in fixed point
/// (kScale units per 1.0) so that equal-area rectangles over a constant image
/// produce bit-identical sums, which makes every Haar response on a constant
/// image exactly zero. Quantization error is below 3e-14 per pixel.
class IntegralImage {
 public:
  static constexpr double kScale = 0x1.0p44;

  explicit IntegralImage(const Spectrogram& s);

  std::size_t bands() const { return bands_; }
  std::size_t columns() const { return columns_; }

  /// Fixed-point sum over bands [band, band + height) and columns
  /// [column, column + width); four lookups, three additions.
  std::int64_t raw_sum(std::size_t band, std::size_t column, std::size_t height, std::size_t width) const {
    const std::size_t stride = columns_ + 1;
    const std::size_t b1 = band + height;
    const std::size_t c1 = column + width;
    return table_[b1 * stride + c1] - table_[band * stride + c1] - table_[b1 * stride + column] +
           table_[band * stride + column];
  }

  double rect_sum(std::size_t band, std::size_t column, std::size_t height, std::size_t width) const {
    return static_cast<double>(raw_sum(band, column, height, width)) / kScale;
  }

  /// Entry (i, j): sum of all values with band < i and column < j.
  double at(std::size_t i, std::size_t j) const { return static_cast<double>(table_[i * (columns_ + 1) + j]) / kScale; }

 private:
  std::size_t bands_;
  std::size_t columns_;
  std::vector<std::int64_t> table_;
};

IntegralImage integral(const Spectrogram& s);

enum class Kind : std::uint8_t {
  edge_horizontal,  ///< two bands of cells: lower-band half +1, upper-band half -1
  edge_vertical,    ///< two columns of cells: earlier half +1, later half -1
  line_horizontal,  ///< three band stripes: outer -1, centre +2
  line_vertical,    ///< three column stripes: outer -1, centre +2
  center_surround,  ///< 3x3 cells: centre cell +8, surrounding cells -1
  diagonal,         ///< 2x2 cells: main diagonal +1, anti-diagonal -1
};

inline constexpr std::array<Kind, 6> kAllKinds{Kind::edge_horizontal, Kind::edge_vertical, Kind::line_horizontal,
                                               Kind::line_vertical,   Kind::center_surround, Kind::diagonal};

std::string_view to_string(Kind kind);
Kind parse_kind(std::string_view name);

/// Footprint in cells (columns, bands) for one unit of scale.
struct CellGrid {
  std::size_t columns;
  std::size_t bands;
};
CellGrid cell_grid(Kind kind);

struct HaarFeature {
  Kind kind = Kind::edge_vertical;
  std::size_t band = 0;    ///< origin: lowest band covered
  std::size_t column = 0;  ///< origin: first column covered
  std::size_t width = 2;   ///< columns covered
  std::size_t height = 1;  ///< bands covered

  bool fits(std::size_t bands, std::size_t columns) const;
  /// True when width/height are positive multiples of the kind's cell grid.
  bool well_formed() const;

  friend bool operator==(const HaarFeature&, const HaarFeature&) = default;
  friend auto operator<=>(const HaarFeature&, const HaarFeature&) = default;
};

/// "haar <kind> <band> <column> <width> <height>"
std::string serialize(const HaarFeature& f);
HaarFeature parse_haar(std::string_view line);

using FeatureBank = std::vector<HaarFeature>;

/// Every kind at every in-bounds origin, for every pair (sx, sy) of cell
/// width/height drawn from `scales`. Order: kind, cell height, cell width,
/// band, column. Duplicate scales are ignored.
FeatureBank enumerate_haar(std::size_t bands, std::size_t columns, const std::vector<std::size_t>& scales);
/// Scales 1..max(bands, columns), i.e. every footprint that fits.
std::vector<std::size_t> all_scales(std::size_t bands, std::size_t columns);

/// Weighted combination of rectangle sums; throws InvalidArgument when the
/// feature does not fit the image.
double eval_haar(const HaarFeature& f, const IntegralImage& img);
/// Same, without bounds checks. Callers guarantee f fits.
double eval_haar_unchecked(const HaarFeature& f, const IntegralImage& img);

}  // namespace phoneboost::haar
