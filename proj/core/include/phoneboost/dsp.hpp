#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "phoneboost/segmentation.hpp"
#include "phoneboost/spectrogram.hpp"
#include "phoneboost/wav.hpp"

namespace phoneboost::dsp {

enum class WindowKind { hamming };

struct StftConfig {
  std::size_t frame_length = 128;  // N, even
  std::size_t increment = 64;      // 0 < i <= N
  WindowKind window = WindowKind::hamming;

  void validate() const;
  std::size_t bins() const { return frame_length / 2 + 1; }
};

/// w[n] = 0.54 - 0.46 cos(2 pi n / (N - 1)), 0 <= n < N. Requires N >= 2.
std::vector<double> hamming(std::size_t n);

/// Power spectrogram. Column m holds |DFT|^2 of the Hamming-weighted frame
/// samples [i*m, i*m + N), i.e. the frame centred at c_m = N/2 + i*m. Bands
/// are the N/2 + 1 nonnegative-frequency bins; there are floor((len - N)/i) + 1
/// columns. Throws InvalidArgument when the input is shorter than N.
Spectrogram stft_power(std::span<const double> samples, const StftConfig& cfg);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filters with peaks equally spaced on the mel scale. Filter k
/// rises from edge k to its peak at edge k+1 (value 1) and falls to zero at
/// edge k+2, where edges are n_mel + 2 mel-uniform points over [f_min, f_max].
class MelBank {
 public:
  MelBank(std::vector<double> edges_hz, std::size_t n_fft_bins, double sample_rate);

  std::size_t size() const { return edges_hz_.size() - 2; }
  std::size_t fft_bins() const { return n_fft_bins_; }
  double peak_hz(std::size_t filter) const { return edges_hz_[filter + 1]; }
  const std::vector<double>& edges_hz() const { return edges_hz_; }

  /// Continuous triangle evaluated at an arbitrary frequency.
  double response(std::size_t filter, double hz) const;
  /// Weight of fft bin `bin` in filter `filter` (the triangle at the bin frequency).
  double weight(std::size_t filter, std::size_t bin) const { return weights_[filter * n_fft_bins_ + bin]; }
  double bin_hz(std::size_t bin) const;

  /// out[k] = sum_b weight(k, b) * power[b].
  void apply(std::span<const double> power, std::span<double> out) const;

 private:
  std::vector<double> edges_hz_;
  std::size_t n_fft_bins_;
  double sample_rate_;
  std::vector<double> weights_;
};

MelBank build_mel_bank(std::size_t n_mel, std::size_t n_fft_bins, double sample_rate, double f_min, double f_max);

/// Added before the logarithm.
inline constexpr double kLogEpsilon = 1e-10;

/// Absolute log10 clip interval.
struct ClipRange {
  double low = -6.0;
  double high = 0.0;
};

Spectrogram apply_mel(const Spectrogram& power, const MelBank& bank);
/// log10(value + kLogEpsilon) elementwise; result stage is log.
Spectrogram log_compress(const Spectrogram& mel);
/// Clips to [low, high] and maps that interval affinely onto [0, 1].
Spectrogram normalize(const Spectrogram& log_values, ClipRange clip);
/// apply_mel, log_compress and normalize in sequence. Requires stage power.
Spectrogram process_spectrogram(const Spectrogram& power, const MelBank& bank, ClipRange clip);

/// Bilinear resampling onto a target grid with corner alignment: output
/// column j samples input column j * (C_in - 1) / (C_out - 1) (the centre
/// when C_out == 1), likewise for bands. Stage is preserved.
Spectrogram warp(const Spectrogram& s, std::size_t target_bands, std::size_t target_columns);

enum class WindowMode { exact, fixed_center, margins };

struct WindowSpec {
  WindowMode mode = WindowMode::exact;
  double seconds = 0.0;  // half-width for fixed_center, margin for margins
};

/// Samples of the segment's analysis window; positions outside the recording
/// read as zero.
///   exact        -> [start, end)
///   fixed_center -> [c - dt, c + dt) with c = floor((start + end) / 2)
///   margins      -> [start - m, end + m)
std::vector<double> extract_segment_window(const Recording& recording, const PhoneSegment& segment,
                                           const WindowSpec& spec);

/// Duration boundaries (seconds) of the three stacked frames: [0, 0.075),
/// [0.075, 0.150), [0.150, inf).
inline constexpr std::array<double, 2> kStackBoundaries{0.075, 0.150};
std::size_t stack_frame_index(double duration_seconds);

/// Three vertically stacked frames of bands_per_frame x columns_per_frame; s is
/// warped into the frame selected by its duration and the other two are zero.
Spectrogram stack_frames(const Spectrogram& s, double duration_seconds, std::size_t bands_per_frame,
                         std::size_t columns_per_frame);

/// Original, rows smoothed with [1,2,1]/4, rows smoothed with [1,2,5,2,1]/11,
/// stacked vertically. Edge samples are replicated.
Spectrogram smooth_stack(const Spectrogram& s);
std::vector<double> convolve_replicate(std::span<const double> row, std::span<const double> kernel);

/// Orthonormal DCT-II and its inverse (DCT-III).
std::vector<double> dct2(std::span<const double> x);
std::vector<double> idct2(std::span<const double> coefficients);

struct MfccFrame {
  std::vector<double> coefficients;
  std::vector<double> delta;
  std::vector<double> delta_delta;
};

inline constexpr std::size_t kDefaultMfccCoefficients = 16;
inline constexpr std::size_t kDefaultDeltaHalfWidth = 2;

/// Per column: first n_coeffs of the orthonormal DCT-II of the log-mel values.
/// Requires stage log and 1 <= n_coeffs <= bands.
std::vector<MfccFrame> mfcc(const Spectrogram& log_mel, std::size_t n_coeffs = kDefaultMfccCoefficients);

/// Regression deltas over time with edge replication:
///   d_t = sum_{k=1..K} k (c_{t+k} - c_{t-k}) / (2 sum k^2)
std::vector<std::vector<double>> regression_delta(const std::vector<std::vector<double>>& sequence,
                                                  std::size_t half_width);

/// Fills delta and delta_delta (the delta of the delta).
std::vector<MfccFrame> deltas(std::vector<MfccFrame> frames, std::size_t half_width = kDefaultDeltaHalfWidth);

}  // namespace phoneboost::dsp
