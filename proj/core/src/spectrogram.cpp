#include "phoneboost/spectrogram.hpp"

#include <sstream>

#include "phoneboost/error.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost {

std::string_view to_string(SpectrogramStage stage) {
  switch (stage) {
    case SpectrogramStage::power: return "power";
    case SpectrogramStage::mel: return "mel";
    case SpectrogramStage::log: return "log";
    case SpectrogramStage::normalized: return "normalized";
  }
  return "unknown";
}

Spectrogram::Spectrogram(std::size_t bands, std::size_t columns, SpectrogramStage stage, double fill)
    : bands_(bands), columns_(columns), stage_(stage), values_(bands * columns, fill) {
  if (bands == 0 || columns == 0) throw InvalidArgument("spectrogram needs at least one band and one column");
}

std::string to_text_grid(const Spectrogram& s) {
  std::string out;
  for (std::size_t b = 0; b < s.bands(); ++b) {
    for (std::size_t c = 0; c < s.columns(); ++c) {
      if (c) out += ' ';
      out += text::format_double(s(b, c));
    }
    out += '\n';
  }
  return out;
}

Spectrogram parse_text_grid(std::string_view text, SpectrogramStage stage) {
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto tokens = text::split_whitespace(line);
    if (tokens.empty()) continue;
    auto& row = rows.emplace_back();
    for (const auto& t : tokens) row.push_back(text::parse_double(t, "grid value"));
    if (row.size() != rows.front().size()) throw FormatError("ragged spectrogram grid");
  }
  if (rows.empty()) throw FormatError("empty spectrogram grid");
  Spectrogram s(rows.size(), rows.front().size(), stage);
  for (std::size_t b = 0; b < rows.size(); ++b) {
    for (std::size_t c = 0; c < rows[b].size(); ++c) s(b, c) = rows[b][c];
  }
  return s;
}

void write_text_grid(const std::filesystem::path& path, const Spectrogram& s) { text::write_file(path, to_text_grid(s)); }

}  // namespace phoneboost
