#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "phoneboost/phone_set.hpp"

namespace phoneboost {

/// Labeled half-open sample interval [start, end) within a recording.
struct PhoneSegment {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;  // empty only for unlabeled query segments

  std::size_t length() const { return end - start; }
  friend bool operator==(const PhoneSegment&, const PhoneSegment&) = default;
};

/// Maps raw corpus labels onto a phone set (e.g. TIMIT's 61 labels onto 48).
/// A target of "-" drops the segment.
class LabelMap {
 public:
  static LabelMap load(const std::filesystem::path& path);
  void add(std::string from, std::string to) { map_[std::move(from)] = std::move(to); }
  /// Mapped label, the label itself when unmapped, or an empty string when dropped.
  std::string apply(const std::string& label) const;
  bool empty() const { return map_.empty(); }

 private:
  std::map<std::string, std::string> map_;
};

struct SegmentationOptions {
  /// Accept "start end" lines without a label (label left empty).
  bool allow_unlabeled = false;
  const LabelMap* label_map = nullptr;
};

/// Parses TIMIT .phn-style text: one "start end label" triple per non-empty
/// line, sample-index units, kept in file order. Errors name the line number.
std::vector<PhoneSegment> parse_segmentation(std::string_view text, const PhoneSet& phone_set,
                                             const SegmentationOptions& options = {});
std::vector<PhoneSegment> read_segmentation(const std::filesystem::path& path, const PhoneSet& phone_set,
                                            const SegmentationOptions& options = {});
void write_segmentation(const std::filesystem::path& path, const std::vector<PhoneSegment>& segments);

}  // namespace phoneboost
