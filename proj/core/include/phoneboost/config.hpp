#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "phoneboost/boosting.hpp"
#include "phoneboost/dsp.hpp"
#include "phoneboost/hog.hpp"

namespace phoneboost {

enum class LengthMode { exact_warp, fixed_center, margins, stacked_frames, hog_pooled };
enum class FeatureFamily { haar, hog_svm, mfcc_stump };

std::string_view to_string(LengthMode mode);
std::string_view to_string(FeatureFamily family);
LengthMode parse_length_mode(std::string_view name);
FeatureFamily parse_feature_family(std::string_view name);

/// Everything needed to turn a labeled segment into feature values and train
/// a pairwise classifier. Stored verbatim in model manifests.
struct PipelineConfig {
  int sample_rate = 16000;
  std::size_t frame_length = 128;
  std::size_t frame_increment = 64;

  std::size_t mel_bands = 14;
  double f_min = 0.0;
  double f_max = 8000.0;
  /// Clip interval in log10 units relative to the training-corpus maximum.
  double clip_low = -6.0;
  double clip_high = 0.0;

  LengthMode length_mode = LengthMode::exact_warp;
  std::size_t target_bands = 14;
  std::size_t target_columns = 15;
  double center_halfwidth = 0.12;  ///< seconds, fixed-center mode
  double margin = 0.03;            ///< seconds, margins mode
  std::size_t pool_columns = 15;   ///< T0, hog-pooled mode
  hog::Pooling pool_mode = hog::Pooling::avg;
  bool hog_smoothing = true;  ///< hog-pooled: stack the [1,2,1] and [1,2,5,2,1] smoothed copies

  FeatureFamily features = FeatureFamily::haar;
  /// Empty means every scale that fits the image.
  std::vector<std::size_t> haar_scales;
  std::size_t mfcc_coeffs = 12;
  std::size_t delta_half_width = 2;

  boosting::Mode boosting = boosting::Mode::gentle;
  std::size_t rounds = 100;
  std::uint64_t seed = 1;
  double svm_c = 1.0;

  /// Throws ValidationError on nonpositive sizes/durations or an incompatible
  /// mode/family combination.
  void validate() const;

  dsp::StftConfig stft() const;

  /// "key = value" lines in a fixed key order.
  std::string serialize() const;
  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Parses "key = value" lines; '#' starts a comment, unknown keys are
/// errors, absent keys keep their defaults. The result is validated.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Applies one "key = value" assignment (also used for CLI overrides).
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value);

}  // namespace phoneboost
