#include "phoneboost/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <json.hpp>

#include "phoneboost/error.hpp"
#include "phoneboost/random.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kNoiseComponents = 48;

void check(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

void SynthSpec::validate() const {
  check(sample_rate > 0, "sample_rate must be positive");
  check(context_ms >= 0.0, "context_ms must be nonnegative");
  check(background_level >= 0.0, "background_level must be nonnegative");
  check(!classes.empty(), "synth spec has no classes");
  const double nyquist = sample_rate / 2.0;
  std::set<std::string> seen;
  for (const auto& c : classes) {
    const std::string where = "class '" + c.label + "': ";
    check(!c.label.empty(), "class with empty label");
    check(seen.insert(c.label).second, where + "duplicate label");
    check(c.min_duration_ms > 0.0 && c.max_duration_ms >= c.min_duration_ms, where + "duration range must be positive");
    const double max_s = c.max_duration_ms / 1000.0;
    for (const auto& f : c.formants) {
      const double lo = f.frequency_hz - c.jitter.frequency_hz - std::max(0.0, -f.slope_hz_per_s) * max_s;
      const double hi = f.frequency_hz + c.jitter.frequency_hz + std::max(0.0, f.slope_hz_per_s) * max_s;
      check(hi < nyquist, where + "formant reaches " + text::format_double(hi) + " Hz, at or above Nyquist " +
                              text::format_double(nyquist));
      check(lo > 0.0, where + "formant drifts to a nonpositive frequency");
    }
    if (c.noise) {
      check(c.noise->low_hz >= 0.0 && c.noise->low_hz < c.noise->high_hz, where + "noise band must satisfy low < high");
      check(c.noise->high_hz < nyquist, where + "noise band at or above Nyquist");
    }
    if (c.plosive) check(c.plosive->length_ms > 0.0, where + "plosive length must be positive");
  }
  for (const auto& g : groups) {
    for (const auto& m : g) check(seen.count(m) > 0, "group member '" + m + "' is not a class label");
  }
}

PhoneSet SynthSpec::phone_set() const {
  std::vector<std::string> labels;
  for (const auto& c : classes) labels.push_back(c.label);
  return PhoneSet(std::move(labels), groups);
}

SynthSpec parse_synth_spec(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("synth spec is not valid JSON: ") + e.what());
  }
  try {
    SynthSpec spec;
    spec.sample_rate = doc.value("sample_rate", spec.sample_rate);
    spec.seed = doc.value("seed", spec.seed);
    spec.context_ms = doc.value("context_ms", spec.context_ms);
    spec.background_level = doc.value("background_level", spec.background_level);
    if (doc.contains("groups")) spec.groups = doc.at("groups").get<std::vector<std::vector<std::string>>>();
    for (const auto& jc : doc.at("classes")) {
      ClassRecipe c;
      c.label = jc.at("label").get<std::string>();
      const auto range = jc.at("duration_ms").get<std::vector<double>>();
      if (range.size() != 2) throw FormatError("class '" + c.label + "': duration_ms must be [min, max]");
      c.min_duration_ms = range[0];
      c.max_duration_ms = range[1];
      for (const auto& jf : jc.value("formants", json::array())) {
        Formant f;
        f.frequency_hz = jf.at("hz").get<double>();
        f.slope_hz_per_s = jf.value("slope_hz_per_s", 0.0);
        f.amplitude = jf.value("amplitude", f.amplitude);
        c.formants.push_back(f);
      }
      if (jc.contains("noise")) {
        const auto& jn = jc.at("noise");
        NoiseBand n;
        n.low_hz = jn.at("low_hz").get<double>();
        n.high_hz = jn.at("high_hz").get<double>();
        n.amplitude = jn.value("amplitude", 0.2);
        n.onset_ms = jn.value("onset_ms", 0.0);
        n.duration_ms = jn.value("duration_ms", 0.0);
        c.noise = n;
      }
      if (jc.contains("plosive")) {
        const auto& jp = jc.at("plosive");
        PlosiveBurst p;
        p.position_ms = jp.value("position_ms", 0.0);
        p.length_ms = jp.value("length_ms", p.length_ms);
        p.amplitude = jp.value("amplitude", p.amplitude);
        c.plosive = p;
      }
      if (jc.contains("jitter")) {
        const auto& jj = jc.at("jitter");
        c.jitter.frequency_hz = jj.value("frequency_hz", 0.0);
        c.jitter.amplitude = jj.value("amplitude", 0.0);
        c.jitter.gain_db = jj.value("gain_db", 0.0);
      }
      spec.classes.push_back(std::move(c));
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw FormatError(std::string("synth spec: ") + e.what());
  }
}

SynthSpec load_synth_spec(const std::filesystem::path& path) { return parse_synth_spec(text::read_file(path)); }

namespace {

void add_formant(std::vector<double>& x, std::size_t onset, std::size_t length, double rate, double f0, double slope,
                 double amplitude, double phase) {
  for (std::size_t n = 0; n < length; ++n) {
    const double t = static_cast<double>(n) / rate;
    x[onset + n] += amplitude * std::sin(kTwoPi * (f0 * t + 0.5 * slope * t * t) + phase);
  }
}

void add_band_noise(std::vector<double>& x, std::size_t onset, std::size_t length, double rate, const NoiseBand& band,
                    double gain, Rng& rng) {
  const double component_amplitude = band.amplitude * gain * std::sqrt(2.0 / kNoiseComponents);
  for (int k = 0; k < kNoiseComponents; ++k) {
    const double f = rng.uniform(band.low_hz, band.high_hz);
    const double phase = rng.uniform(0.0, kTwoPi);
    for (std::size_t n = 0; n < length; ++n) {
      x[onset + n] += component_amplitude * std::sin(kTwoPi * f * static_cast<double>(n) / rate + phase);
    }
  }
}

SynthSample make_sample(const SynthSpec& spec, const ClassRecipe& recipe, Rng& rng) {
  const double rate = spec.sample_rate;
  const double duration_ms = rng.uniform(recipe.min_duration_ms, recipe.max_duration_ms);
  const auto length = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(duration_ms * rate / 1000.0)));
  const auto context = static_cast<std::size_t>(std::llround(spec.context_ms * rate / 1000.0));

  std::vector<double> phone(length, 0.0);
  const double gain = std::pow(10.0, rng.uniform(-recipe.jitter.gain_db, recipe.jitter.gain_db) / 20.0);
  const double shift = rng.uniform(-recipe.jitter.frequency_hz, recipe.jitter.frequency_hz);
  for (const auto& f : recipe.formants) {
    const double amp = f.amplitude * gain * (1.0 + rng.uniform(-recipe.jitter.amplitude, recipe.jitter.amplitude));
    add_formant(phone, 0, length, rate, f.frequency_hz + shift, f.slope_hz_per_s, amp, rng.uniform(0.0, kTwoPi));
  }
  if (recipe.noise) {
    const auto& band = *recipe.noise;
    const auto onset = std::min(length - 1, static_cast<std::size_t>(std::llround(band.onset_ms * rate / 1000.0)));
    std::size_t span = length - onset;
    if (band.duration_ms > 0.0) {
      span = std::min(span, std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(band.duration_ms * rate / 1000.0))));
    }
    add_band_noise(phone, onset, span, rate, band, gain * (1.0 + rng.uniform(-recipe.jitter.amplitude, recipe.jitter.amplitude)), rng);
  }

  // Raised-cosine onset/offset ramps keep the segment edges from splattering.
  const std::size_t ramp = std::min<std::size_t>(length / 4, static_cast<std::size_t>(0.005 * rate));
  for (std::size_t n = 0; n < ramp; ++n) {
    const double g = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(n) / static_cast<double>(ramp));
    phone[n] *= g;
    phone[length - 1 - n] *= g;
  }

  if (recipe.plosive) {
    const auto& p = *recipe.plosive;
    const auto at = std::min(length - 1, static_cast<std::size_t>(std::llround(p.position_ms * rate / 1000.0)));
    const auto span = std::min(length - at, std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(p.length_ms * rate / 1000.0))));
    for (std::size_t n = 0; n < span; ++n) {
      const double decay = std::exp(-3.0 * static_cast<double>(n) / static_cast<double>(span));
      phone[at + n] += p.amplitude * gain * decay * rng.normal();
    }
  }

  SynthSample sample;
  sample.recording.sample_rate = spec.sample_rate;
  sample.recording.samples.assign(2 * context + length, 0.0);
  for (auto& s : sample.recording.samples) s = spec.background_level * rng.normal();
  for (std::size_t n = 0; n < length; ++n) sample.recording.samples[context + n] += phone[n];
  // Quantize to the 16-bit grid so in-memory samples equal their WAV round trip.
  for (auto& s : sample.recording.samples) s = std::clamp(std::nearbyint(s * 32768.0), -32768.0, 32767.0) / 32768.0;
  sample.segment = PhoneSegment{context, context + length, recipe.label};
  return sample;
}

}  // namespace

std::vector<SynthSample> generate_corpus(const SynthSpec& spec, std::size_t n_per_class, std::uint64_t stream) {
  if (n_per_class == 0) throw InvalidArgument("n_per_class must be at least 1");
  spec.validate();
  std::vector<SynthSample> out;
  out.reserve(n_per_class * spec.classes.size());
  for (std::size_t k = 0; k < spec.classes.size(); ++k) {
    for (std::size_t i = 0; i < n_per_class; ++i) {
      Rng rng(derive_seed(derive_seed(spec.seed, stream), k, i));
      out.push_back(make_sample(spec, spec.classes[k], rng));
    }
  }
  return out;
}

}  // namespace phoneboost
