#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "phoneboost/multiclass.hpp"

namespace phoneboost {

/// "<a>__<b>.clf"
std::string pair_file_name(std::string_view a, std::string_view b);
/// "ova__<a>.clf"
std::string ova_file_name(std::string_view label);

/// Classifier file: header, descriptor list, strong classifier record.
std::string serialize(const multiclass::PairClassifier& c);
multiclass::PairClassifier parse_pair_classifier(std::string_view text);

/// Writes manifest.txt plus one classifier file per pair (and per phone for
/// one-vs-all). Creates the directory if needed.
void save_model(const multiclass::MulticlassModel& model, const std::filesystem::path& dir);
/// Reads and validates a model directory. Missing classifier files raise
/// IoError naming the file.
multiclass::MulticlassModel load_model(const std::filesystem::path& dir);

}  // namespace phoneboost
