#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phoneboost {

enum class SpectrogramStage { power, mel, log, normalized };

std::string_view to_string(SpectrogramStage stage);

/// Band-by-column grid of reals. Band 0 is the lowest frequency; storage is
/// row-major with one row per band.
class Spectrogram {
 public:
  Spectrogram() = default;
  Spectrogram(std::size_t bands, std::size_t columns, SpectrogramStage stage, double fill = 0.0);

  std::size_t bands() const { return bands_; }
  std::size_t columns() const { return columns_; }
  SpectrogramStage stage() const { return stage_; }
  void set_stage(SpectrogramStage stage) { stage_ = stage; }

  double& operator()(std::size_t band, std::size_t column) { return values_[band * columns_ + column]; }
  double operator()(std::size_t band, std::size_t column) const { return values_[band * columns_ + column]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> row(std::size_t band) const { return std::span(values_).subspan(band * columns_, columns_); }
  std::span<double> row(std::size_t band) { return std::span(values_).subspan(band * columns_, columns_); }

  friend bool operator==(const Spectrogram&, const Spectrogram&) = default;

 private:
  std::size_t bands_ = 0;
  std::size_t columns_ = 0;
  SpectrogramStage stage_ = SpectrogramStage::power;
  std::vector<double> values_;
};

/// Text grid: one line per band (band 0 first), columns separated by single
/// spaces, each value in shortest round-trip decimal form.
std::string to_text_grid(const Spectrogram& s);
Spectrogram parse_text_grid(std::string_view text, SpectrogramStage stage);
void write_text_grid(const std::filesystem::path& path, const Spectrogram& s);

}  // namespace phoneboost
