#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "phoneboost/boosting.hpp"
#include "phoneboost/config.hpp"
#include "phoneboost/corpus.hpp"
#include "phoneboost/dsp.hpp"
#include "phoneboost/haar.hpp"
#include "phoneboost/hog.hpp"

namespace phoneboost {

/// Values fixed from the training corpus and stored with a model.
struct ResolvedPipeline {
  double clip_reference = 0.0;  ///< largest log10 mel energy seen in training windows
  double mean_duration = 0.0;   ///< mean training segment length, seconds
  std::size_t image_bands = 0;
  std::size_t image_columns = 0;  ///< 0 when the image length follows the segment (hog-pooled)

  friend bool operator==(const ResolvedPipeline&, const ResolvedPipeline&) = default;
};

/// One coefficient of the flattened MFCC vector: part c, d (delta) or dd
/// (delta-delta), coefficient index, warped column.
struct MfccFeature {
  enum class Part : std::uint8_t { c, d, dd };
  Part part = Part::c;
  std::size_t coeff = 0;
  std::size_t column = 0;
  friend bool operator==(const MfccFeature&, const MfccFeature&) = default;
};

using FeatureDescriptor = std::variant<haar::HaarFeature, hog::HogSvmFeature, MfccFeature>;

std::string serialize(const FeatureDescriptor& d);
/// Dispatches on the first token: haar, hog or mfcc.
FeatureDescriptor parse_descriptor(std::string_view line);

/// A segment after rendering: the image that Haar/HoG features read, its
/// integral image (Haar only) and the flattened MFCC vector (mfcc-stump only).
struct PreparedSample {
  Spectrogram image;
  std::optional<haar::IntegralImage> integral;
  std::vector<double> mfcc;  ///< column-major: for each column, c[0..n) d[0..n) dd[0..n)
  double duration = 0.0;
};

class FeaturePipeline {
 public:
  FeaturePipeline(PipelineConfig config, ResolvedPipeline resolved);

  /// Resolves corpus-dependent values (clip reference, mean duration, image
  /// geometry) from training items.
  static FeaturePipeline fit(const PipelineConfig& config, std::span<const CorpusItem> training);

  const PipelineConfig& config() const { return config_; }
  const ResolvedPipeline& resolved() const { return resolved_; }
  const dsp::MelBank& mel_bank() const { return bank_; }

  dsp::WindowSpec window_spec() const;
  /// Log-stage mel spectrogram of the segment's analysis window; windows
  /// shorter than one frame are zero-padded to one frame.
  Spectrogram log_mel(const CorpusItem& item) const;
  /// The normalized image the configured length mode produces.
  Spectrogram render(const CorpusItem& item) const;
  PreparedSample prepare(const CorpusItem& item) const;

  std::size_t mfcc_columns() const;
  std::size_t mfcc_length() const { return 3 * config_.mfcc_coeffs * mfcc_columns(); }

 private:
  void check_recording(const CorpusItem& item) const;

  PipelineConfig config_;
  ResolvedPipeline resolved_;
  dsp::MelBank bank_;
};

/// Value of a descriptor on a prepared sample.
double evaluate(const FeatureDescriptor& d, const PreparedSample& s, const PipelineConfig& config);

struct LabeledSample {
  const PreparedSample* sample;
  int label;  ///< -1 or +1
};

/// Candidate features for one binary problem together with their values on
/// every sample. HoG candidates carry a per-patch SVM trained on `samples`.
struct CandidateSet {
  std::vector<FeatureDescriptor> candidates;
  boosting::SampleMatrix matrix;
};

/// Throws InvalidArgument when either label is missing.
CandidateSet build_candidates(const FeaturePipeline& pipeline, std::span<const LabeledSample> samples,
                              std::uint64_t seed);

/// HoG patches used by the pipeline: enumerated on the fixed image, or on
/// target_bands x pool_columns (replicated per smoothed copy) for hog-pooled.
std::vector<hog::HogPatch> pipeline_patches(const PipelineConfig& config, const ResolvedPipeline& resolved);

}  // namespace phoneboost
