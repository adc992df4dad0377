#include "phoneboost/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <optional>

#include "phoneboost/error.hpp"

namespace fs = std::filesystem;

namespace phoneboost {

std::vector<const CorpusItem*> Corpus::with_label(const std::string& label) const {
  std::vector<const CorpusItem*> out;
  for (const auto& item : items) {
    if (item.segment.label == label) out.push_back(&item);
  }
  return out;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<fs::path> child_dir(const fs::path& root, const std::string& name) {
  if (!fs::is_directory(root)) return std::nullopt;
  std::vector<fs::path> matches;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && lower(entry.path().filename().string()) == name) matches.push_back(entry.path());
  }
  if (matches.empty()) return std::nullopt;
  std::sort(matches.begin(), matches.end());
  return matches.front();
}

std::optional<fs::path> sibling_with_extension(const fs::path& file, const std::string& ext) {
  std::string upper = ext;
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (const auto& candidate : {lower(ext), upper}) {
    auto p = file;
    p.replace_extension(candidate);
    if (fs::exists(p)) return p;
  }
  return std::nullopt;
}

}  // namespace

Corpus load_corpus(const fs::path& root, Split split) {
  if (!fs::is_directory(root)) throw IoError("corpus directory not found: " + root.string());

  Corpus corpus;
  const auto phones = root / "phones.txt";
  corpus.phone_set = fs::exists(phones) ? PhoneSet::load(phones, root / "groups.txt") : PhoneSet::timit48();
  std::optional<LabelMap> label_map;
  if (fs::exists(root / "labelmap.txt")) label_map = LabelMap::load(root / "labelmap.txt");

  fs::path dir = root;
  if (split == Split::train) {
    if (auto d = child_dir(root, "train")) dir = *d;
  } else if (split == Split::test) {
    auto d = child_dir(root, "test");
    if (!d) throw IoError("corpus has no test directory: " + root.string());
    dir = *d;
  }

  std::vector<fs::path> wavs;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && lower(entry.path().extension().string()) == ".wav") wavs.push_back(entry.path());
  }
  std::sort(wavs.begin(), wavs.end());

  SegmentationOptions options;
  options.label_map = label_map ? &*label_map : nullptr;
  for (const auto& wav : wavs) {
    const auto phn = sibling_with_extension(wav, ".phn");
    if (!phn) continue;
    auto recording = std::make_shared<const Recording>(read_wav(wav));
    for (auto& seg : read_segmentation(*phn, corpus.phone_set, options)) {
      if (seg.end > recording->samples.size()) {
        throw ValidationError(phn->string() + ": segment [" + std::to_string(seg.start) + "," +
                              std::to_string(seg.end) + ") extends past the recording (" +
                              std::to_string(recording->samples.size()) + " samples)");
      }
      corpus.items.push_back(CorpusItem{recording, std::move(seg)});
    }
  }
  return corpus;
}

std::vector<CorpusItem> to_corpus_items(std::vector<SynthSample> samples) {
  std::vector<CorpusItem> items;
  items.reserve(samples.size());
  for (auto& s : samples) {
    items.push_back(CorpusItem{std::make_shared<const Recording>(std::move(s.recording)), std::move(s.segment)});
  }
  return items;
}

void write_synth_corpus(const SynthSpec& spec, const fs::path& dir, std::size_t n_per_class,
                        std::size_t n_test_per_class) {
  spec.validate();
  if (n_per_class == 0) throw InvalidArgument("n_per_class must be at least 1");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create corpus directory " + dir.string());

  spec.phone_set().save(dir / "phones.txt", dir / "groups.txt");

  const auto write_split = [&](const std::string& name, std::size_t n, std::uint64_t stream) {
    const auto split_dir = dir / name;
    fs::create_directories(split_dir, ec);
    if (ec) throw IoError("cannot create " + split_dir.string());
    const auto samples = generate_corpus(spec, n, stream);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      char stem[64];
      std::snprintf(stem, sizeof stem, "%s_%05zu", samples[i].segment.label.c_str(), i % n);
      write_wav(split_dir / (std::string(stem) + ".wav"), samples[i].recording);
      write_segmentation(split_dir / (std::string(stem) + ".phn"), {samples[i].segment});
    }
  };
  write_split("train", n_per_class, 0);
  if (n_test_per_class > 0) write_split("test", n_test_per_class, 1);
}

}  // namespace phoneboost
