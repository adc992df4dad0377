#include "phoneboost/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "phoneboost/error.hpp"
#include "phoneboost/parallel.hpp"
#include "phoneboost/random.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost {

namespace {

std::string_view part_name(MfccFeature::Part p) {
  switch (p) {
    case MfccFeature::Part::c: return "c";
    case MfccFeature::Part::d: return "d";
    case MfccFeature::Part::dd: return "dd";
  }
  return "?";
}

MfccFeature::Part parse_part(std::string_view name) {
  if (name == "c") return MfccFeature::Part::c;
  if (name == "d") return MfccFeature::Part::d;
  if (name == "dd") return MfccFeature::Part::dd;
  throw FormatError("unknown mfcc part '" + std::string(name) + "'");
}

std::size_t mfcc_index(const MfccFeature& f, std::size_t n_coeffs) {
  return f.column * 3 * n_coeffs + static_cast<std::size_t>(f.part) * n_coeffs + f.coeff;
}

ResolvedPipeline geometry(const PipelineConfig& c, double mean_duration) {
  ResolvedPipeline r;
  r.mean_duration = mean_duration;
  r.image_bands = c.target_bands;
  r.image_columns = c.target_columns;
  switch (c.length_mode) {
    case LengthMode::exact_warp:
    case LengthMode::fixed_center:
      break;
    case LengthMode::margins: {
      const double scaled = static_cast<double>(c.target_columns) * (mean_duration + 2.0 * c.margin) / mean_duration;
      r.image_columns = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(scaled)));
      break;
    }
    case LengthMode::stacked_frames:
      r.image_bands = 3 * c.target_bands;
      break;
    case LengthMode::hog_pooled:
      r.image_bands = c.target_bands * (c.hog_smoothing ? 3 : 1);
      r.image_columns = 0;
      break;
  }
  return r;
}

}  // namespace

std::string serialize(const FeatureDescriptor& d) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, MfccFeature>) {
          return "mfcc " + std::string(part_name(f.part)) + " " + std::to_string(f.coeff) + " " +
                 std::to_string(f.column);
        } else if constexpr (std::is_same_v<T, haar::HaarFeature>) {
          return haar::serialize(f);
        } else {
          return hog::serialize(f);
        }
      },
      d);
}

FeatureDescriptor parse_descriptor(std::string_view line) {
  const auto fields = text::split_whitespace(line);
  if (fields.empty()) throw FormatError("empty feature descriptor");
  if (fields[0] == "haar") return haar::parse_haar(line);
  if (fields[0] == "hog") return hog::parse_hog(line);
  if (fields[0] == "mfcc") {
    if (fields.size() != 4) throw FormatError("mfcc descriptor needs: mfcc <c|d|dd> <coeff> <column>");
    MfccFeature f;
    f.part = parse_part(fields[1]);
    const auto coeff = text::parse_int(fields[2], "mfcc coefficient");
    const auto column = text::parse_int(fields[3], "mfcc column");
    if (coeff < 0 || column < 0) throw FormatError("mfcc descriptor indices must be nonnegative");
    f.coeff = static_cast<std::size_t>(coeff);
    f.column = static_cast<std::size_t>(column);
    return f;
  }
  throw FormatError("unknown feature descriptor '" + fields[0] + "'");
}

FeaturePipeline::FeaturePipeline(PipelineConfig config, ResolvedPipeline resolved)
    : config_(std::move(config)),
      resolved_(resolved),
      bank_(dsp::build_mel_bank(config_.mel_bands, config_.frame_length / 2 + 1, config_.sample_rate, config_.f_min,
                                config_.f_max)) {
  config_.validate();
}

FeaturePipeline FeaturePipeline::fit(const PipelineConfig& config, std::span<const CorpusItem> training) {
  config.validate();
  if (training.empty()) throw InvalidArgument("cannot fit a pipeline without training segments");
  double total = 0.0;
  for (const auto& item : training) {
    total += static_cast<double>(item.segment.length()) / item.recording->sample_rate;
  }
  const double mean = total / static_cast<double>(training.size());
  if (!(mean > 0.0)) throw ValidationError("training segments have zero mean duration");

  FeaturePipeline draft(config, geometry(config, mean));
  std::vector<double> peaks(training.size(), -std::numeric_limits<double>::infinity());
  parallel_for(training.size(), [&](std::size_t i) {
    const Spectrogram s = draft.log_mel(training[i]);
    for (double v : s.values()) peaks[i] = std::max(peaks[i], v);
  });
  ResolvedPipeline resolved = draft.resolved();
  resolved.clip_reference = *std::max_element(peaks.begin(), peaks.end());
  return FeaturePipeline(config, resolved);
}

dsp::WindowSpec FeaturePipeline::window_spec() const {
  switch (config_.length_mode) {
    case LengthMode::fixed_center: return {dsp::WindowMode::fixed_center, config_.center_halfwidth};
    case LengthMode::margins: return {dsp::WindowMode::margins, config_.margin};
    default: return {dsp::WindowMode::exact, 0.0};
  }
}

void FeaturePipeline::check_recording(const CorpusItem& item) const {
  if (!item.recording) throw InvalidArgument("corpus item without a recording");
  if (item.recording->sample_rate != config_.sample_rate) {
    throw ValidationError("geometry mismatch: recording sampled at " + std::to_string(item.recording->sample_rate) +
                          " Hz but the pipeline expects " + std::to_string(config_.sample_rate) + " Hz");
  }
  if (item.segment.end < item.segment.start) throw ValidationError("segment ends before it starts");
}

Spectrogram FeaturePipeline::log_mel(const CorpusItem& item) const {
  check_recording(item);
  std::vector<double> window = dsp::extract_segment_window(*item.recording, item.segment, window_spec());
  if (window.size() < config_.frame_length) window.resize(config_.frame_length, 0.0);
  return dsp::log_compress(dsp::apply_mel(dsp::stft_power(window, config_.stft()), bank_));
}

Spectrogram FeaturePipeline::render(const CorpusItem& item) const {
  const Spectrogram log = log_mel(item);
  const dsp::ClipRange clip{resolved_.clip_reference + config_.clip_low, resolved_.clip_reference + config_.clip_high};
  const Spectrogram norm = dsp::normalize(log, clip);
  Spectrogram out;
  switch (config_.length_mode) {
    case LengthMode::exact_warp:
    case LengthMode::fixed_center:
    case LengthMode::margins:
      out = dsp::warp(norm, resolved_.image_bands, resolved_.image_columns);
      break;
    case LengthMode::stacked_frames: {
      const double duration = static_cast<double>(item.segment.length()) / item.recording->sample_rate;
      // Zero-length segments still need a frame; they belong to the shortest one.
      out = dsp::stack_frames(norm, std::max(duration, 1e-9), config_.target_bands, config_.target_columns);
      break;
    }
    case LengthMode::hog_pooled: {
      const std::size_t columns = std::max(norm.columns(), config_.pool_columns);
      out = dsp::warp(norm, config_.target_bands, columns);
      if (config_.hog_smoothing) out = dsp::smooth_stack(out);
      break;
    }
  }
  if (out.bands() != resolved_.image_bands || (resolved_.image_columns != 0 && out.columns() != resolved_.image_columns)) {
    throw ValidationError("geometry mismatch: rendered " + std::to_string(out.bands()) + "x" +
                          std::to_string(out.columns()) + " image, model expects " +
                          std::to_string(resolved_.image_bands) + "x" + std::to_string(resolved_.image_columns));
  }
  return out;
}

std::size_t FeaturePipeline::mfcc_columns() const {
  return resolved_.image_columns == 0 ? config_.target_columns : resolved_.image_columns;
}

PreparedSample FeaturePipeline::prepare(const CorpusItem& item) const {
  PreparedSample p;
  p.duration = static_cast<double>(item.segment.length()) / item.recording->sample_rate;
  if (config_.features == FeatureFamily::mfcc_stump) {
    const Spectrogram log = dsp::warp(log_mel(item), config_.mel_bands, mfcc_columns());
    const auto frames = dsp::deltas(dsp::mfcc(log, config_.mfcc_coeffs), config_.delta_half_width);
    p.mfcc.reserve(mfcc_length());
    for (const auto& f : frames) {
      p.mfcc.insert(p.mfcc.end(), f.coefficients.begin(), f.coefficients.end());
      p.mfcc.insert(p.mfcc.end(), f.delta.begin(), f.delta.end());
      p.mfcc.insert(p.mfcc.end(), f.delta_delta.begin(), f.delta_delta.end());
    }
    return p;
  }
  p.image = render(item);
  if (config_.features == FeatureFamily::haar) p.integral.emplace(p.image);
  return p;
}

double evaluate(const FeatureDescriptor& d, const PreparedSample& s, const PipelineConfig& config) {
  if (const auto* h = std::get_if<haar::HaarFeature>(&d)) {
    if (!s.integral) throw InvalidArgument("haar feature evaluated on a sample without an integral image");
    return haar::eval_haar(*h, *s.integral);
  }
  if (const auto* g = std::get_if<hog::HogSvmFeature>(&d)) {
    if (config.length_mode == LengthMode::hog_pooled) {
      return hog::pooled_hog_feature(*g, s.image, config.pool_columns, config.pool_mode);
    }
    return hog::eval_hog_feature(*g, s.image);
  }
  const auto& m = std::get<MfccFeature>(d);
  if (m.coeff >= config.mfcc_coeffs) throw InvalidArgument("mfcc coefficient index out of range");
  const std::size_t index = mfcc_index(m, config.mfcc_coeffs);
  if (index >= s.mfcc.size()) throw InvalidArgument("mfcc feature beyond the sample's vector");
  return s.mfcc[index];
}

std::vector<hog::HogPatch> pipeline_patches(const PipelineConfig& config, const ResolvedPipeline& resolved) {
  if (config.length_mode != LengthMode::hog_pooled) return hog::enumerate_hog(resolved.image_bands, resolved.image_columns);
  const auto base = hog::enumerate_hog(config.target_bands, config.pool_columns);
  const std::size_t copies = config.hog_smoothing ? 3 : 1;
  std::vector<hog::HogPatch> out;
  out.reserve(base.size() * copies);
  for (std::size_t k = 0; k < copies; ++k) {
    for (auto p : base) {
      p.band += k * config.target_bands;
      out.push_back(p);
    }
  }
  return out;
}

CandidateSet build_candidates(const FeaturePipeline& pipeline, std::span<const LabeledSample> samples,
                              std::uint64_t seed) {
  const auto& config = pipeline.config();
  const std::size_t n = samples.size();
  bool has_pos = false, has_neg = false;
  for (const auto& s : samples) (s.label > 0 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw InvalidArgument("binary problem needs samples of both labels");

  CandidateSet out;
  switch (config.features) {
    case FeatureFamily::haar: {
      const auto& r = pipeline.resolved();
      const auto scales = config.haar_scales.empty() ? haar::all_scales(r.image_bands, r.image_columns) : config.haar_scales;
      const auto bank = haar::enumerate_haar(r.image_bands, r.image_columns, scales);
      for (const auto& s : samples) {
        if (!s.sample->integral || s.sample->integral->bands() != r.image_bands ||
            s.sample->integral->columns() != r.image_columns) {
          throw InvalidArgument("sample image does not match the pipeline geometry");
        }
      }
      out.matrix = boosting::SampleMatrix(n, bank.size());
      parallel_chunks(bank.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t f = begin; f < end; ++f) {
          auto column = out.matrix.feature_column(f);
          for (std::size_t i = 0; i < n; ++i) column[i] = haar::eval_haar_unchecked(bank[f], *samples[i].sample->integral);
        }
      });
      out.candidates.assign(bank.begin(), bank.end());
      break;
    }
    case FeatureFamily::hog_svm: {
      const auto patches = pipeline_patches(config, pipeline.resolved());
      const bool pooled = config.length_mode == LengthMode::hog_pooled;
      out.matrix = boosting::SampleMatrix(n, patches.size());
      std::vector<hog::HogSvmFeature> trained(patches.size());
      parallel_for(patches.size(), [&](std::size_t p) {
        std::vector<hog::HogHistogram> hist(n);
        std::vector<hog::HogHistogram> pos, neg;
        for (std::size_t i = 0; i < n; ++i) {
          const Spectrogram& image = samples[i].sample->image;
          hist[i] = pooled ? hog::pooled_histogram(image, patches[p], config.pool_columns, config.pool_mode)
                           : hog::hog_histogram(image, patches[p]);
          (samples[i].label > 0 ? pos : neg).push_back(hist[i]);
        }
        svm::Options options;
        options.c = config.svm_c;
        options.seed = derive_seed(seed, p);
        trained[p] = hog::train_patch_svm(patches[p], pos, neg, options);
        auto column = out.matrix.feature_column(p);
        for (std::size_t i = 0; i < n; ++i) column[i] = trained[p].apply(hist[i]);
      });
      out.candidates.assign(trained.begin(), trained.end());
      break;
    }
    case FeatureFamily::mfcc_stump: {
      const std::size_t coeffs = config.mfcc_coeffs;
      const std::size_t length = pipeline.mfcc_length();
      for (const auto& s : samples) {
        if (s.sample->mfcc.size() != length) throw InvalidArgument("sample MFCC vector does not match the pipeline");
      }
      out.matrix = boosting::SampleMatrix(n, length);
      out.candidates.reserve(length);
      for (std::size_t column = 0; column < pipeline.mfcc_columns(); ++column) {
        for (auto part : {MfccFeature::Part::c, MfccFeature::Part::d, MfccFeature::Part::dd}) {
          for (std::size_t k = 0; k < coeffs; ++k) out.candidates.push_back(MfccFeature{part, k, column});
        }
      }
      for (std::size_t f = 0; f < length; ++f) {
        auto column = out.matrix.feature_column(f);
        for (std::size_t i = 0; i < n; ++i) column[i] = samples[i].sample->mfcc[f];
      }
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.matrix.labels()[i] = samples[i].label;
  return out;
}

}  // namespace phoneboost
