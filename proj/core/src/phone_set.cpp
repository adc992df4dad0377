#include "phoneboost/phone_set.hpp"

#include <sstream>

#include "phoneboost/error.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost {

PhoneSet::PhoneSet(std::vector<std::string> labels, std::vector<std::vector<std::string>> groups)
    : labels_(std::move(labels)), groups_(std::move(groups)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw ValidationError("empty phone label");
    if (!index_.emplace(labels_[i], i).second) throw ValidationError("duplicate phone label '" + labels_[i] + "'");
  }
  group_of_.assign(labels_.size(), -1);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    for (const auto& member : groups_[g]) {
      const auto it = index_.find(member);
      if (it == index_.end()) throw ValidationError("group member '" + member + "' is not a phone label");
      if (group_of_[it->second] != -1) {
        throw ValidationError("label '" + member + "' appears in more than one equivalence group");
      }
      group_of_[it->second] = static_cast<int>(g);
    }
  }
}

PhoneSet PhoneSet::timit48() {
  return PhoneSet(
      {"iy", "ih", "eh", "ae", "ix", "ax", "ah", "uw", "uh", "ao", "aa", "ey", "ay", "oy", "aw", "ow",
       "er", "l",  "el", "r",  "y",  "w",  "m",  "n",  "en", "ng", "ch", "jh", "dh", "b",  "d",  "dx",
       "g",  "p",  "t",  "k",  "z",  "zh", "v",  "f",  "th", "s",  "sh", "hh", "cl", "vcl", "epi", "sil"},
      {{"sil", "cl", "vcl", "epi"}, {"el", "l"}, {"en", "n"}, {"sh", "zh"}, {"ao", "aa"}, {"ih", "ix"}, {"ah", "ax"}});
}

namespace {

std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto trimmed = text::trim(line);
    if (!trimmed.empty()) lines.emplace_back(trimmed);
  }
  return lines;
}

}  // namespace

PhoneSet PhoneSet::load(const std::filesystem::path& labels_file,
                        const std::optional<std::filesystem::path>& groups_file) {
  auto labels = content_lines(text::read_file(labels_file));
  std::vector<std::vector<std::string>> groups;
  if (groups_file && std::filesystem::exists(*groups_file)) {
    for (const auto& line : content_lines(text::read_file(*groups_file))) {
      auto members = text::split(line, ',');
      std::erase_if(members, [](const std::string& m) { return m.empty(); });
      if (!members.empty()) groups.push_back(std::move(members));
    }
  }
  return PhoneSet(std::move(labels), std::move(groups));
}

void PhoneSet::save(const std::filesystem::path& labels_file, const std::filesystem::path& groups_file) const {
  std::string labels;
  for (const auto& l : labels_) labels += l + "\n";
  std::string groups;
  for (const auto& g : groups_) {
    for (std::size_t i = 0; i < g.size(); ++i) groups += (i ? "," : "") + g[i];
    groups += "\n";
  }
  text::write_file(labels_file, labels);
  text::write_file(groups_file, groups);
}

bool PhoneSet::contains(std::string_view label) const { return index_.count(std::string(label)) > 0; }

std::size_t PhoneSet::index_of(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) throw ValidationError("unknown phone label '" + std::string(label) + "'");
  return it->second;
}

bool PhoneSet::scoring_equivalent(std::size_t a, std::size_t b) const {
  if (a >= labels_.size() || b >= labels_.size()) throw ValidationError("phone index out of range");
  return a == b || (group_of_[a] != -1 && group_of_[a] == group_of_[b]);
}

bool PhoneSet::scoring_equivalent(std::string_view a, std::string_view b) const {
  return scoring_equivalent(index_of(a), index_of(b));
}

bool scoring_equivalent(std::string_view a, std::string_view b, const PhoneSet& phone_set) {
  return phone_set.scoring_equivalent(a, b);
}

}  // namespace phoneboost
