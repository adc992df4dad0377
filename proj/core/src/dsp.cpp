#include "phoneboost/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "phoneboost/error.hpp"

namespace phoneboost::dsp {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread-safe; execution with the new-array interface is.
class R2cPlans {
 public:
  static R2cPlans& instance() {
    static R2cPlans plans;
    return plans;
  }

  fftw_plan get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    // ESTIMATE keeps the chosen algorithm, and hence rounding, fixed across runs.
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (!plan) throw Error("FFTW could not plan a transform of length " + std::to_string(n));
    plans_.emplace(n, plan);
    return plan;
  }

  ~R2cPlans() {
    for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> plans_;
};

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

void require_stage(const Spectrogram& s, SpectrogramStage stage, const char* op) {
  if (s.stage() != stage) {
    throw InvalidArgument(std::string(op) + " expects a " + std::string(to_string(stage)) + " spectrogram, got " +
                          std::string(to_string(s.stage())));
  }
}

}  // namespace

void StftConfig::validate() const {
  if (frame_length == 0 || frame_length % 2 != 0) throw InvalidArgument("frame length must be positive and even");
  if (increment == 0 || increment > frame_length) throw InvalidArgument("increment must lie in (0, frame length]");
}

std::vector<double> hamming(std::size_t n) {
  if (n < 2) throw InvalidArgument("Hamming window needs N >= 2");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return w;
}

Spectrogram stft_power(std::span<const double> samples, const StftConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.frame_length;
  if (samples.size() < n) {
    throw InvalidArgument("signal of " + std::to_string(samples.size()) + " samples is shorter than the frame length " +
                          std::to_string(n));
  }
  const auto window = hamming(n);
  const std::size_t columns = (samples.size() - n) / cfg.increment + 1;
  const std::size_t bins = cfg.bins();
  Spectrogram out(bins, columns, SpectrogramStage::power);

  fftw_plan plan = R2cPlans::instance().get(n);
  std::unique_ptr<double, FftwDeleter> in(fftw_alloc_real(n));
  std::unique_ptr<fftw_complex, FftwDeleter> spectrum(fftw_alloc_complex(bins));
  for (std::size_t m = 0; m < columns; ++m) {
    const std::size_t first = m * cfg.increment;
    for (std::size_t j = 0; j < n; ++j) in.get()[j] = samples[first + j] * window[j];
    fftw_execute_dft_r2c(plan, in.get(), spectrum.get());
    for (std::size_t k = 0; k < bins; ++k) {
      const double re = spectrum.get()[k][0];
      const double im = spectrum.get()[k][1];
      out(k, m) = re * re + im * im;
    }
  }
  return out;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelBank::MelBank(std::vector<double> edges_hz, std::size_t n_fft_bins, double sample_rate)
    : edges_hz_(std::move(edges_hz)), n_fft_bins_(n_fft_bins), sample_rate_(sample_rate) {
  if (edges_hz_.size() < 3) throw InvalidArgument("mel bank needs at least one filter");
  if (n_fft_bins_ < 2) throw InvalidArgument("mel bank needs at least two fft bins");
  weights_.assign(size() * n_fft_bins_, 0.0);
  for (std::size_t k = 0; k < size(); ++k) {
    for (std::size_t b = 0; b < n_fft_bins_; ++b) weights_[k * n_fft_bins_ + b] = response(k, bin_hz(b));
  }
}

double MelBank::bin_hz(std::size_t bin) const {
  return static_cast<double>(bin) * (sample_rate_ / 2.0) / static_cast<double>(n_fft_bins_ - 1);
}

double MelBank::response(std::size_t filter, double hz) const {
  const double left = edges_hz_[filter];
  const double peak = edges_hz_[filter + 1];
  const double right = edges_hz_[filter + 2];
  if (hz <= left || hz >= right) return 0.0;
  if (hz == peak) return 1.0;
  return hz < peak ? (hz - left) / (peak - left) : (right - hz) / (right - peak);
}

void MelBank::apply(std::span<const double> power, std::span<double> out) const {
  for (std::size_t k = 0; k < size(); ++k) {
    double acc = 0.0;
    const double* w = &weights_[k * n_fft_bins_];
    for (std::size_t b = 0; b < n_fft_bins_; ++b) acc += w[b] * power[b];
    out[k] = acc;
  }
}

MelBank build_mel_bank(std::size_t n_mel, std::size_t n_fft_bins, double sample_rate, double f_min, double f_max) {
  if (n_mel < 1) throw InvalidArgument("mel band count must be at least 1");
  if (!(f_min >= 0.0 && f_min < f_max && f_max <= sample_rate / 2.0)) {
    throw InvalidArgument("mel bank needs 0 <= f_min < f_max <= sample_rate / 2");
  }
  const double lo = hz_to_mel(f_min);
  const double hi = hz_to_mel(f_max);
  std::vector<double> edges(n_mel + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_mel + 1));
  }
  edges.front() = f_min;
  edges.back() = f_max;
  return MelBank(std::move(edges), n_fft_bins, sample_rate);
}

Spectrogram apply_mel(const Spectrogram& power, const MelBank& bank) {
  require_stage(power, SpectrogramStage::power, "apply_mel");
  if (power.bands() != bank.fft_bins()) {
    throw InvalidArgument("mel bank built for " + std::to_string(bank.fft_bins()) + " bins applied to " +
                          std::to_string(power.bands()));
  }
  Spectrogram out(bank.size(), power.columns(), SpectrogramStage::mel);
  std::vector<double> column(power.bands());
  std::vector<double> mel(bank.size());
  for (std::size_t c = 0; c < power.columns(); ++c) {
    for (std::size_t b = 0; b < power.bands(); ++b) column[b] = power(b, c);
    bank.apply(column, mel);
    for (std::size_t k = 0; k < mel.size(); ++k) out(k, c) = mel[k];
  }
  return out;
}

Spectrogram log_compress(const Spectrogram& mel) {
  Spectrogram out = mel;
  out.set_stage(SpectrogramStage::log);
  for (double& v : out.values()) v = std::log10(std::max(v, 0.0) + kLogEpsilon);
  return out;
}

Spectrogram normalize(const Spectrogram& log_values, ClipRange clip) {
  require_stage(log_values, SpectrogramStage::log, "normalize");
  if (!(clip.low < clip.high)) throw InvalidArgument("clip range must satisfy low < high");
  Spectrogram out = log_values;
  out.set_stage(SpectrogramStage::normalized);
  const double scale = 1.0 / (clip.high - clip.low);
  for (double& v : out.values()) v = (std::clamp(v, clip.low, clip.high) - clip.low) * scale;
  return out;
}

Spectrogram process_spectrogram(const Spectrogram& power, const MelBank& bank, ClipRange clip) {
  require_stage(power, SpectrogramStage::power, "process_spectrogram");
  return normalize(log_compress(apply_mel(power, bank)), clip);
}

namespace {

struct Tap {
  std::size_t lo;
  std::size_t hi;
  double frac;
};

std::vector<Tap> linear_taps(std::size_t in, std::size_t out) {
  std::vector<Tap> taps(out);
  for (std::size_t j = 0; j < out; ++j) {
    const double pos = out == 1 ? (static_cast<double>(in) - 1.0) / 2.0
                                : static_cast<double>(j) * static_cast<double>(in - 1) / static_cast<double>(out - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    lo = std::min(lo, in - 1);
    const std::size_t hi = std::min(lo + 1, in - 1);
    taps[j] = Tap{lo, hi, pos - static_cast<double>(lo)};
  }
  return taps;
}

}  // namespace

Spectrogram warp(const Spectrogram& s, std::size_t target_bands, std::size_t target_columns) {
  if (target_bands < 1 || target_columns < 1) throw InvalidArgument("warp target dimensions must be at least 1");
  if (target_bands == s.bands() && target_columns == s.columns()) return s;
  const auto band_taps = linear_taps(s.bands(), target_bands);
  const auto col_taps = linear_taps(s.columns(), target_columns);
  Spectrogram out(target_bands, target_columns, s.stage());
  for (std::size_t i = 0; i < target_bands; ++i) {
    const auto& bt = band_taps[i];
    for (std::size_t j = 0; j < target_columns; ++j) {
      const auto& ct = col_taps[j];
      const double top = s(bt.lo, ct.lo) + ct.frac * (s(bt.lo, ct.hi) - s(bt.lo, ct.lo));
      const double bottom = s(bt.hi, ct.lo) + ct.frac * (s(bt.hi, ct.hi) - s(bt.hi, ct.lo));
      double v = top + bt.frac * (bottom - top);
      if (s.stage() == SpectrogramStage::normalized) v = std::clamp(v, 0.0, 1.0);
      out(i, j) = v;
    }
  }
  return out;
}

std::vector<double> extract_segment_window(const Recording& recording, const PhoneSegment& segment,
                                           const WindowSpec& spec) {
  long long first = static_cast<long long>(segment.start);
  long long last = static_cast<long long>(segment.end);
  const auto to_samples = [&](double seconds) {
    return static_cast<long long>(std::llround(seconds * recording.sample_rate));
  };
  switch (spec.mode) {
    case WindowMode::exact:
      break;
    case WindowMode::fixed_center: {
      const long long center = (first + last) / 2;
      const long long half = to_samples(spec.seconds);
      first = center - half;
      last = center + half;
      break;
    }
    case WindowMode::margins: {
      const long long margin = to_samples(spec.seconds);
      first -= margin;
      last += margin;
      break;
    }
  }
  if (last < first) last = first;
  std::vector<double> out(static_cast<std::size_t>(last - first), 0.0);
  const auto size = static_cast<long long>(recording.samples.size());
  for (long long n = std::max(first, 0LL); n < std::min(last, size); ++n) {
    out[static_cast<std::size_t>(n - first)] = recording.samples[static_cast<std::size_t>(n)];
  }
  return out;
}

std::size_t stack_frame_index(double duration_seconds) {
  if (!(duration_seconds > 0.0)) throw InvalidArgument("stacked frames need a positive duration");
  if (duration_seconds < kStackBoundaries[0]) return 0;
  if (duration_seconds < kStackBoundaries[1]) return 1;
  return 2;
}

Spectrogram stack_frames(const Spectrogram& s, double duration_seconds, std::size_t bands_per_frame,
                         std::size_t columns_per_frame) {
  const std::size_t frame = stack_frame_index(duration_seconds);
  const Spectrogram warped = warp(s, bands_per_frame, columns_per_frame);
  Spectrogram out(3 * bands_per_frame, columns_per_frame, s.stage(), 0.0);
  for (std::size_t b = 0; b < bands_per_frame; ++b) {
    for (std::size_t c = 0; c < columns_per_frame; ++c) out(frame * bands_per_frame + b, c) = warped(b, c);
  }
  return out;
}

std::vector<double> convolve_replicate(std::span<const double> row, std::span<const double> kernel) {
  const auto n = static_cast<long long>(row.size());
  const auto half = static_cast<long long>(kernel.size() / 2);
  std::vector<double> out(row.size(), 0.0);
  for (long long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long long k = 0; k < static_cast<long long>(kernel.size()); ++k) {
      const long long src = std::clamp(i + k - half, 0LL, n - 1);
      acc += kernel[static_cast<std::size_t>(k)] * row[static_cast<std::size_t>(src)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

Spectrogram smooth_stack(const Spectrogram& s) {
  static constexpr std::array<double, 3> kSmall{1.0 / 4.0, 2.0 / 4.0, 1.0 / 4.0};
  static constexpr std::array<double, 5> kLarge{1.0 / 11.0, 2.0 / 11.0, 5.0 / 11.0, 2.0 / 11.0, 1.0 / 11.0};
  Spectrogram out(3 * s.bands(), s.columns(), s.stage());
  for (std::size_t b = 0; b < s.bands(); ++b) {
    const auto row = s.row(b);
    std::copy(row.begin(), row.end(), out.row(b).begin());
    const auto small = convolve_replicate(row, kSmall);
    const auto large = convolve_replicate(row, kLarge);
    std::copy(small.begin(), small.end(), out.row(s.bands() + b).begin());
    std::copy(large.begin(), large.end(), out.row(2 * s.bands() + b).begin());
  }
  if (s.stage() == SpectrogramStage::normalized) {
    for (double& v : out.values()) v = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

std::vector<double> dct2(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  const double n_d = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += x[i] * std::cos(kPi * (static_cast<double>(i) + 0.5) * static_cast<double>(k) / n_d);
    }
    out[k] = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / n_d);
  }
  return out;
}

std::vector<double> idct2(std::span<const double> coefficients) {
  const std::size_t n = coefficients.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  const double n_d = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += coefficients[k] * std::sqrt((k == 0 ? 1.0 : 2.0) / n_d) *
             std::cos(kPi * (static_cast<double>(i) + 0.5) * static_cast<double>(k) / n_d);
    }
    out[i] = acc;
  }
  return out;
}

std::vector<MfccFrame> mfcc(const Spectrogram& log_mel, std::size_t n_coeffs) {
  require_stage(log_mel, SpectrogramStage::log, "mfcc");
  if (n_coeffs < 1 || n_coeffs > log_mel.bands()) {
    throw InvalidArgument("MFCC coefficient count " + std::to_string(n_coeffs) + " outside [1, " +
                          std::to_string(log_mel.bands()) + "]");
  }
  std::vector<MfccFrame> frames(log_mel.columns());
  std::vector<double> column(log_mel.bands());
  for (std::size_t c = 0; c < log_mel.columns(); ++c) {
    for (std::size_t b = 0; b < log_mel.bands(); ++b) column[b] = log_mel(b, c);
    auto coeffs = dct2(column);
    coeffs.resize(n_coeffs);
    frames[c].coefficients = std::move(coeffs);
  }
  return frames;
}

std::vector<std::vector<double>> regression_delta(const std::vector<std::vector<double>>& sequence,
                                                  std::size_t half_width) {
  if (sequence.empty()) throw InvalidArgument("delta of an empty sequence");
  if (half_width < 1) throw InvalidArgument("delta half-width must be at least 1");
  const auto t_count = static_cast<long long>(sequence.size());
  const std::size_t dim = sequence.front().size();
  double denom = 0.0;
  for (std::size_t k = 1; k <= half_width; ++k) denom += static_cast<double>(k * k);
  denom *= 2.0;

  std::vector<std::vector<double>> out(sequence.size(), std::vector<double>(dim, 0.0));
  for (long long t = 0; t < t_count; ++t) {
    for (std::size_t k = 1; k <= half_width; ++k) {
      const auto kk = static_cast<long long>(k);
      const auto& ahead = sequence[static_cast<std::size_t>(std::min(t + kk, t_count - 1))];
      const auto& behind = sequence[static_cast<std::size_t>(std::max(t - kk, 0LL))];
      for (std::size_t d = 0; d < dim; ++d) out[static_cast<std::size_t>(t)][d] += static_cast<double>(k) * (ahead[d] - behind[d]);
    }
    for (double& v : out[static_cast<std::size_t>(t)]) v /= denom;
  }
  return out;
}

std::vector<MfccFrame> deltas(std::vector<MfccFrame> frames, std::size_t half_width) {
  if (frames.empty()) throw InvalidArgument("delta of an empty sequence");
  std::vector<std::vector<double>> coeffs;
  coeffs.reserve(frames.size());
  for (const auto& f : frames) coeffs.push_back(f.coefficients);
  const auto d = regression_delta(coeffs, half_width);
  const auto dd = regression_delta(d, half_width);
  for (std::size_t t = 0; t < frames.size(); ++t) {
    frames[t].delta = d[t];
    frames[t].delta_delta = dd[t];
  }
  return frames;
}

}  // namespace phoneboost::dsp
