#include "phoneboost/segmentation.hpp"

#include <sstream>

#include "phoneboost/error.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost {

LabelMap LabelMap::load(const std::filesystem::path& path) {
  LabelMap map;
  std::istringstream in(text::read_file(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = text::split_whitespace(line);
    if (tokens.empty() || tokens.front().starts_with('#')) continue;
    if (tokens.size() != 2) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 'from to'");
    }
    map.add(tokens[0], tokens[1]);
  }
  return map;
}

std::string LabelMap::apply(const std::string& label) const {
  const auto it = map_.find(label);
  if (it == map_.end()) return label;
  return it->second == "-" ? std::string{} : it->second;
}

std::vector<PhoneSegment> parse_segmentation(std::string_view text, const PhoneSet& phone_set,
                                             const SegmentationOptions& options) {
  std::vector<PhoneSegment> segments;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = text::split_whitespace(line);
    if (tokens.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (tokens.size() != 3 && !(options.allow_unlabeled && tokens.size() == 2)) {
      throw FormatError(where + ": expected 'start end label'");
    }
    const long long start = text::parse_int(tokens[0], where + " start");
    const long long end = text::parse_int(tokens[1], where + " end");
    if (start < 0) throw ValidationError(where + ": negative start " + tokens[0]);
    if (start >= end) throw ValidationError(where + ": start " + tokens[0] + " is not before end " + tokens[1]);

    PhoneSegment seg{static_cast<std::size_t>(start), static_cast<std::size_t>(end), {}};
    if (tokens.size() == 3) {
      seg.label = options.label_map ? options.label_map->apply(tokens[2]) : tokens[2];
      if (seg.label.empty()) continue;  // dropped by the label map
      if (!phone_set.contains(seg.label)) {
        throw ValidationError(where + ": unknown phone label '" + seg.label + "'");
      }
    }
    segments.push_back(std::move(seg));
  }
  return segments;
}

std::vector<PhoneSegment> read_segmentation(const std::filesystem::path& path, const PhoneSet& phone_set,
                                            const SegmentationOptions& options) {
  const auto contents = text::read_file(path);
  try {
    return parse_segmentation(contents, phone_set, options);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_segmentation(const std::filesystem::path& path, const std::vector<PhoneSegment>& segments) {
  std::string out;
  for (const auto& s : segments) {
    out += std::to_string(s.start) + " " + std::to_string(s.end);
    if (!s.label.empty()) out += " " + s.label;
    out += "\n";
  }
  text::write_file(path, out);
}

}  // namespace phoneboost
