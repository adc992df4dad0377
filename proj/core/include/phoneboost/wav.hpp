#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace phoneboost {

/// A mono recording. Samples are air-pressure values in [-1, 1].
struct Recording {
  std::vector<double> samples;
  int sample_rate = 16000;

  double duration_seconds() const { return static_cast<double>(samples.size()) / sample_rate; }
};

/// Reads a RIFF/WAVE file holding 16-bit PCM mono audio. Samples are divided
/// by 32768. Unknown chunks are skipped.
///
/// Throws FormatError for a malformed container and UnsupportedFormatError
/// (naming the offending field) for non-PCM, non-mono or non-16-bit data.
Recording read_wav(const std::filesystem::path& path);
Recording parse_wav(std::span<const unsigned char> bytes);

/// Writes the canonical 44-byte-header layout. Samples are scaled by 32768,
/// rounded to nearest and clamped to the int16 range, so read/write of a
/// canonical file is byte-exact.
void write_wav(const std::filesystem::path& path, const Recording& recording);
std::vector<unsigned char> encode_wav(const Recording& recording);

}  // namespace phoneboost
