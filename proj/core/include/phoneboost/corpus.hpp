#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "phoneboost/phone_set.hpp"
#include "phoneboost/segmentation.hpp"
#include "phoneboost/synth.hpp"
#include "phoneboost/wav.hpp"

namespace phoneboost {

struct CorpusItem {
  std::shared_ptr<const Recording> recording;
  PhoneSegment segment;
};

struct Corpus {
  PhoneSet phone_set;
  std::vector<CorpusItem> items;

  /// Items whose label equals `label`, in corpus order.
  std::vector<const CorpusItem*> with_label(const std::string& label) const;
};

enum class Split { train, test, all };

/// Loads a TIMIT-layout corpus: every *.wav under the split directory with a
/// sibling *.phn segmentation. The split directory is `train`/`test` (any
/// case) below root; Split::train falls back to root when there is no train
/// directory. phones.txt / groups.txt in root define the phone set (default:
/// 48-phone TIMIT folding) and labelmap.txt, when present, maps raw labels.
Corpus load_corpus(const std::filesystem::path& root, Split split);

std::vector<CorpusItem> to_corpus_items(std::vector<SynthSample> samples);

/// Writes train/ and test/ WAV + .phn files plus phones.txt and groups.txt.
void write_synth_corpus(const SynthSpec& spec, const std::filesystem::path& dir, std::size_t n_per_class,
                        std::size_t n_test_per_class);

}  // namespace phoneboost
