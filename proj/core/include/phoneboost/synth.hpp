#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "phoneboost/phone_set.hpp"
#include "phoneboost/segmentation.hpp"
#include "phoneboost/wav.hpp"

namespace phoneboost {

/// A sinusoidal component whose frequency drifts linearly from onset.
struct Formant {
  double frequency_hz = 500.0;
  double slope_hz_per_s = 0.0;
  double amplitude = 0.3;
};

/// Band-limited noise; duration_ms == 0 means "until the segment ends".
struct NoiseBand {
  double low_hz = 0.0;
  double high_hz = 0.0;
  double amplitude = 0.0;
  double onset_ms = 0.0;
  double duration_ms = 0.0;
};

/// Broadband transient placed position_ms after the segment onset.
struct PlosiveBurst {
  double position_ms = 0.0;
  double length_ms = 5.0;
  double amplitude = 0.5;
};

/// Per-sample random perturbations.
struct Jitter {
  double frequency_hz = 0.0;  ///< common formant shift, uniform in [-f, f]
  double amplitude = 0.0;     ///< relative per-component amplitude change
  double gain_db = 0.0;       ///< overall loudness change, uniform in [-g, g] dB
};

struct ClassRecipe {
  std::string label;
  std::vector<Formant> formants;
  std::optional<NoiseBand> noise;
  std::optional<PlosiveBurst> plosive;
  double min_duration_ms = 60.0;
  double max_duration_ms = 120.0;
  Jitter jitter;
};

/// Recipe for a labeled synthetic corpus. Every sample is one recording: a
/// phone segment flanked by context_ms of background noise on each side.
struct SynthSpec {
  int sample_rate = 16000;
  std::uint64_t seed = 1;
  double context_ms = 150.0;
  double background_level = 0.002;
  std::vector<ClassRecipe> classes;
  std::vector<std::vector<std::string>> groups;

  /// Throws ValidationError when a frequency reaches Nyquist, a duration
  /// range is empty or non-positive, or labels repeat.
  void validate() const;
  PhoneSet phone_set() const;
};

SynthSpec parse_synth_spec(const std::string& json_text);
SynthSpec load_synth_spec(const std::filesystem::path& path);

struct SynthSample {
  Recording recording;
  PhoneSegment segment;
};

/// n_per_class samples of every class, class-major order. A pure function of
/// (spec, n_per_class, stream); different streams give independent draws,
/// which is how train and test splits are kept apart.
std::vector<SynthSample> generate_corpus(const SynthSpec& spec, std::size_t n_per_class, std::uint64_t stream = 0);

}  // namespace phoneboost
