#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace phoneboost {

/// Ordered phone labels plus groups of labels whose mutual confusions are not
/// counted as errors. Groups are pairwise disjoint.
class PhoneSet {
 public:
  PhoneSet() = default;
  /// Throws ValidationError on duplicate labels, group members outside the
  /// label list, or a label that appears in two groups.
  PhoneSet(std::vector<std::string> labels, std::vector<std::vector<std::string>> groups = {});

  /// The 48-phone TIMIT folding with the usual seven scoring groups.
  static PhoneSet timit48();

  /// labels file: one label per line. groups file (optional): one group per
  /// line, members joined by commas. Blank lines and '#' comments are ignored.
  static PhoneSet load(const std::filesystem::path& labels_file,
                       const std::optional<std::filesystem::path>& groups_file = std::nullopt);
  void save(const std::filesystem::path& labels_file, const std::filesystem::path& groups_file) const;

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::vector<std::string>>& groups() const { return groups_; }
  std::size_t size() const { return labels_.size(); }

  bool contains(std::string_view label) const;
  /// Position in label order; throws ValidationError for unknown labels.
  std::size_t index_of(std::string_view label) const;

  /// True iff a == b or both sit in the same equivalence group.
  bool scoring_equivalent(std::string_view a, std::string_view b) const;
  bool scoring_equivalent(std::size_t a, std::size_t b) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<std::string>> groups_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<int> group_of_;  // -1 when the label is in no group
};

bool scoring_equivalent(std::string_view a, std::string_view b, const PhoneSet& phone_set);

}  // namespace phoneboost
