#include "phoneboost/config.hpp"

#include <algorithm>
#include <cmath>

#include "phoneboost/error.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view name, const std::pair<E, std::string_view> (&table)[N], std::string_view what) {
  for (const auto& [value, label] : table) {
    if (label == name) return value;
  }
  std::string options;
  for (const auto& [value, label] : table) options += (options.empty() ? "" : "|") + std::string(label);
  throw ValidationError("unknown " + std::string(what) + " '" + std::string(name) + "' (expected " + options + ")");
}

constexpr std::pair<LengthMode, std::string_view> kLengthModes[] = {
    {LengthMode::exact_warp, "exact-warp"},         {LengthMode::fixed_center, "fixed-center"},
    {LengthMode::margins, "margins"},               {LengthMode::stacked_frames, "stacked-frames"},
    {LengthMode::hog_pooled, "hog-pooled"},
};

constexpr std::pair<FeatureFamily, std::string_view> kFamilies[] = {
    {FeatureFamily::haar, "haar"},
    {FeatureFamily::hog_svm, "hog-svm"},
    {FeatureFamily::mfcc_stump, "mfcc-stump"},
};

std::size_t parse_size(std::string_view v, std::string_view key) {
  const auto n = text::parse_int(v, key);
  if (n < 0) throw ValidationError(std::string(key) + " must be nonnegative");
  return static_cast<std::size_t>(n);
}

bool parse_bool(std::string_view v, std::string_view key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError("config: " + message);
}

}  // namespace

std::string_view to_string(LengthMode mode) {
  for (const auto& [value, label] : kLengthModes) {
    if (value == mode) return label;
  }
  return "?";
}

std::string_view to_string(FeatureFamily family) {
  for (const auto& [value, label] : kFamilies) {
    if (value == family) return label;
  }
  return "?";
}

LengthMode parse_length_mode(std::string_view name) { return parse_enum(name, kLengthModes, "length mode"); }
FeatureFamily parse_feature_family(std::string_view name) { return parse_enum(name, kFamilies, "feature family"); }

void PipelineConfig::validate() const {
  require(sample_rate > 0, "sample_rate must be positive");
  require(frame_length >= 2 && frame_length % 2 == 0, "frame_length must be even and at least 2");
  require(frame_increment > 0 && frame_increment <= frame_length, "frame_increment must be in 1..frame_length");
  require(mel_bands > 0, "mel_bands must be positive");
  require(f_min >= 0.0 && f_min < f_max && f_max <= sample_rate / 2.0, "need 0 <= f_min < f_max <= sample_rate/2");
  require(clip_low < clip_high, "clip_low must be below clip_high");
  require(target_bands > 0 && target_columns > 0, "target_bands and target_columns must be positive");
  require(center_halfwidth > 0.0, "center_halfwidth must be positive");
  require(margin >= 0.0, "margin must be nonnegative");
  require(pool_columns > 0, "pool_columns must be positive");
  for (auto s : haar_scales) require(s > 0, "haar_scales entries must be positive");
  require(mfcc_coeffs > 0 && mfcc_coeffs <= mel_bands, "mfcc_coeffs must be in 1..mel_bands");
  require(delta_half_width > 0, "delta_half_width must be positive");
  require(rounds > 0, "rounds must be positive");
  require(svm_c > 0.0, "svm_c must be positive");
  if (length_mode == LengthMode::hog_pooled) {
    require(features == FeatureFamily::hog_svm, "length_mode hog-pooled requires features = hog-svm");
  }
  if (features == FeatureFamily::mfcc_stump) {
    require(length_mode == LengthMode::exact_warp || length_mode == LengthMode::fixed_center ||
                length_mode == LengthMode::margins,
            "features mfcc-stump requires length_mode exact-warp, fixed-center or margins");
  }
}

dsp::StftConfig PipelineConfig::stft() const {
  dsp::StftConfig s;
  s.frame_length = frame_length;
  s.increment = frame_increment;
  return s;
}

std::string PipelineConfig::serialize() const {
  auto f = [](double v) { return text::format_double(v); };
  std::string scales = "all";
  if (!haar_scales.empty()) {
    scales.clear();
    for (auto s : haar_scales) scales += (scales.empty() ? "" : ",") + std::to_string(s);
  }
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) {
    out += std::string(key) + " = " + value + "\n";
  };
  line("sample_rate", std::to_string(sample_rate));
  line("frame_length", std::to_string(frame_length));
  line("frame_increment", std::to_string(frame_increment));
  line("mel_bands", std::to_string(mel_bands));
  line("f_min", f(f_min));
  line("f_max", f(f_max));
  line("clip_low", f(clip_low));
  line("clip_high", f(clip_high));
  line("length_mode", std::string(to_string(length_mode)));
  line("target_bands", std::to_string(target_bands));
  line("target_columns", std::to_string(target_columns));
  line("center_halfwidth", f(center_halfwidth));
  line("margin", f(margin));
  line("pool_columns", std::to_string(pool_columns));
  line("pool_mode", std::string(hog::to_string(pool_mode)));
  line("hog_smoothing", hog_smoothing ? "true" : "false");
  line("features", std::string(to_string(features)));
  line("haar_scales", scales);
  line("mfcc_coeffs", std::to_string(mfcc_coeffs));
  line("delta_half_width", std::to_string(delta_half_width));
  line("boosting", std::string(boosting::to_string(boosting)));
  line("rounds", std::to_string(rounds));
  line("seed", std::to_string(seed));
  line("svm_c", f(svm_c));
  return out;
}

void set_config_value(PipelineConfig& c, std::string_view key, std::string_view value) {
  const std::string k(key);
  if (k == "sample_rate") c.sample_rate = static_cast<int>(text::parse_int(value, key));
  else if (k == "frame_length") c.frame_length = parse_size(value, key);
  else if (k == "frame_increment") c.frame_increment = parse_size(value, key);
  else if (k == "mel_bands") c.mel_bands = parse_size(value, key);
  else if (k == "f_min") c.f_min = text::parse_double(value, key);
  else if (k == "f_max") c.f_max = text::parse_double(value, key);
  else if (k == "clip_low") c.clip_low = text::parse_double(value, key);
  else if (k == "clip_high") c.clip_high = text::parse_double(value, key);
  else if (k == "length_mode") c.length_mode = parse_length_mode(value);
  else if (k == "target_bands") c.target_bands = parse_size(value, key);
  else if (k == "target_columns") c.target_columns = parse_size(value, key);
  else if (k == "center_halfwidth") c.center_halfwidth = text::parse_double(value, key);
  else if (k == "margin") c.margin = text::parse_double(value, key);
  else if (k == "pool_columns") c.pool_columns = parse_size(value, key);
  else if (k == "pool_mode") c.pool_mode = hog::parse_pooling(value);
  else if (k == "hog_smoothing") c.hog_smoothing = parse_bool(value, key);
  else if (k == "features") c.features = parse_feature_family(value);
  else if (k == "haar_scales") {
    c.haar_scales.clear();
    if (value != "all") {
      for (const auto& token : text::split(value, ',')) c.haar_scales.push_back(parse_size(text::trim(token), key));
      std::sort(c.haar_scales.begin(), c.haar_scales.end());
      c.haar_scales.erase(std::unique(c.haar_scales.begin(), c.haar_scales.end()), c.haar_scales.end());
    }
  } else if (k == "mfcc_coeffs") c.mfcc_coeffs = parse_size(value, key);
  else if (k == "delta_half_width") c.delta_half_width = parse_size(value, key);
  else if (k == "boosting") c.boosting = boosting::parse_mode(value);
  else if (k == "rounds") c.rounds = parse_size(value, key);
  else if (k == "seed") c.seed = static_cast<std::uint64_t>(text::parse_int(value, key));
  else if (k == "svm_c") c.svm_c = text::parse_double(value, key);
  else throw ValidationError("unknown config key '" + k + "'");
}

PipelineConfig parse_config(std::string_view text_in) {
  PipelineConfig c;
  std::size_t line_no = 0;
  for (const auto& raw : text::split(text_in, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = text::trim(line.substr(0, eq));
    const auto value = text::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw FormatError("config line " + std::to_string(line_no) + ": empty key or value");
    }
    set_config_value(c, key, value);
  }
  c.validate();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) { return parse_config(text::read_file(path)); }

}  // namespace phoneboost
