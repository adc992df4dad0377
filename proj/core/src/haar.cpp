#include "phoneboost/haar.hpp"

#include <algorithm>
#include <cmath>

#include "phoneboost/error.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost::haar {

IntegralImage::IntegralImage(const Spectrogram& s) : bands_(s.bands()), columns_(s.columns()) {
  const std::size_t stride = columns_ + 1;
  table_.assign((bands_ + 1) * stride, 0);
  for (std::size_t b = 0; b < bands_; ++b) {
    std::int64_t row_sum = 0;
    for (std::size_t c = 0; c < columns_; ++c) {
      row_sum += static_cast<std::int64_t>(std::llround(s(b, c) * kScale));
      table_[(b + 1) * stride + c + 1] = table_[b * stride + c + 1] + row_sum;
    }
  }
}

IntegralImage integral(const Spectrogram& s) { return IntegralImage(s); }

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::edge_horizontal: return "edge_horizontal";
    case Kind::edge_vertical: return "edge_vertical";
    case Kind::line_horizontal: return "line_horizontal";
    case Kind::line_vertical: return "line_vertical";
    case Kind::center_surround: return "center_surround";
    case Kind::diagonal: return "diagonal";
  }
  return "unknown";
}

Kind parse_kind(std::string_view name) {
  for (const Kind k : kAllKinds) {
    if (to_string(k) == name) return k;
  }
  throw FormatError("unknown Haar kind '" + std::string(name) + "'");
}

CellGrid cell_grid(Kind kind) {
  switch (kind) {
    case Kind::edge_horizontal: return {1, 2};
    case Kind::edge_vertical: return {2, 1};
    case Kind::line_horizontal: return {1, 3};
    case Kind::line_vertical: return {3, 1};
    case Kind::center_surround: return {3, 3};
    case Kind::diagonal: return {2, 2};
  }
  return {1, 1};
}

bool HaarFeature::fits(std::size_t bands, std::size_t columns) const {
  return well_formed() && band + height <= bands && column + width <= columns;
}

bool HaarFeature::well_formed() const {
  const auto grid = cell_grid(kind);
  return width > 0 && height > 0 && width % grid.columns == 0 && height % grid.bands == 0;
}

std::string serialize(const HaarFeature& f) {
  return "haar " + std::string(to_string(f.kind)) + " " + std::to_string(f.band) + " " + std::to_string(f.column) + " " +
         std::to_string(f.width) + " " + std::to_string(f.height);
}

HaarFeature parse_haar(std::string_view line) {
  const auto tokens = text::split_whitespace(line);
  if (tokens.size() != 6 || tokens[0] != "haar") throw FormatError("malformed Haar descriptor '" + std::string(line) + "'");
  const auto field = [&](std::size_t i, const char* name) {
    const long long v = text::parse_int(tokens[i], name);
    if (v < 0) throw FormatError(std::string("negative ") + name + " in Haar descriptor");
    return static_cast<std::size_t>(v);
  };
  HaarFeature f{parse_kind(tokens[1]), field(2, "band"), field(3, "column"), field(4, "width"), field(5, "height")};
  if (!f.well_formed()) throw FormatError("Haar descriptor size does not match its kind: '" + std::string(line) + "'");
  return f;
}

std::vector<std::size_t> all_scales(std::size_t bands, std::size_t columns) {
  std::vector<std::size_t> scales(std::max(bands, columns));
  for (std::size_t i = 0; i < scales.size(); ++i) scales[i] = i + 1;
  return scales;
}

FeatureBank enumerate_haar(std::size_t bands, std::size_t columns, const std::vector<std::size_t>& scales) {
  if (scales.empty()) throw InvalidArgument("Haar enumeration needs at least one scale");
  std::vector<std::size_t> sorted = scales;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.front() == 0) throw InvalidArgument("Haar scales must be positive");

  FeatureBank bank;
  for (const Kind kind : kAllKinds) {
    const auto grid = cell_grid(kind);
    for (const std::size_t sy : sorted) {
      const std::size_t height = grid.bands * sy;
      if (height > bands) break;
      for (const std::size_t sx : sorted) {
        const std::size_t width = grid.columns * sx;
        if (width > columns) break;
        for (std::size_t b = 0; b + height <= bands; ++b) {
          for (std::size_t c = 0; c + width <= columns; ++c) bank.push_back(HaarFeature{kind, b, c, width, height});
        }
      }
    }
  }
  return bank;
}

double eval_haar_unchecked(const HaarFeature& f, const IntegralImage& img) {
  std::int64_t v = 0;
  switch (f.kind) {
    case Kind::edge_horizontal: {
      const std::size_t h = f.height / 2;
      v = img.raw_sum(f.band, f.column, h, f.width) - img.raw_sum(f.band + h, f.column, h, f.width);
      break;
    }
    case Kind::edge_vertical: {
      const std::size_t w = f.width / 2;
      v = img.raw_sum(f.band, f.column, f.height, w) - img.raw_sum(f.band, f.column + w, f.height, w);
      break;
    }
    case Kind::line_horizontal: {
      const std::size_t h = f.height / 3;
      v = 2 * img.raw_sum(f.band + h, f.column, h, f.width) - img.raw_sum(f.band, f.column, h, f.width) -
          img.raw_sum(f.band + 2 * h, f.column, h, f.width);
      break;
    }
    case Kind::line_vertical: {
      const std::size_t w = f.width / 3;
      v = 2 * img.raw_sum(f.band, f.column + w, f.height, w) - img.raw_sum(f.band, f.column, f.height, w) -
          img.raw_sum(f.band, f.column + 2 * w, f.height, w);
      break;
    }
    case Kind::center_surround: {
      const std::size_t h = f.height / 3;
      const std::size_t w = f.width / 3;
      // 8 * centre - surround == 9 * centre - whole
      v = 9 * img.raw_sum(f.band + h, f.column + w, h, w) - img.raw_sum(f.band, f.column, f.height, f.width);
      break;
    }
    case Kind::diagonal: {
      const std::size_t h = f.height / 2;
      const std::size_t w = f.width / 2;
      v = img.raw_sum(f.band, f.column, h, w) + img.raw_sum(f.band + h, f.column + w, h, w) -
          img.raw_sum(f.band, f.column + w, h, w) - img.raw_sum(f.band + h, f.column, h, w);
      break;
    }
  }
  return static_cast<double>(v) / IntegralImage::kScale;
}

double eval_haar(const HaarFeature& f, const IntegralImage& img) {
  if (!f.fits(img.bands(), img.columns())) {
    throw InvalidArgument("Haar feature '" + serialize(f) + "' does not fit a " + std::to_string(img.bands()) + "x" +
                          std::to_string(img.columns()) + " image");
  }
  return eval_haar_unchecked(f, img);
}

}  // namespace phoneboost::haar
