#include "phoneboost/model_io.hpp"

#include <algorithm>

#include "phoneboost/error.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost {

namespace {

constexpr std::string_view kClassifierHeader = "phoneboost-classifier 1";
constexpr std::string_view kManifestHeader = "phoneboost-model 1";

void check_file_safe(std::string_view label) {
  const bool ok = !label.empty() && std::all_of(label.begin(), label.end(), [](char ch) {
    return ch != '/' && ch != '\\' && ch > ' ' && ch != 0x7f;
  });
  if (!ok || label.find("__") != std::string_view::npos) {
    throw ValidationError("phone label '" + std::string(label) + "' cannot be used in a file name");
  }
}

std::vector<std::string> lines_of(std::string_view text_in) {
  std::vector<std::string> out;
  for (auto& line : text::split(text_in, '\n')) {
    auto t = text::trim(line);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace

std::string pair_file_name(std::string_view a, std::string_view b) {
  check_file_safe(a);
  check_file_safe(b);
  return std::string(a) + "__" + std::string(b) + ".clf";
}

std::string ova_file_name(std::string_view label) {
  check_file_safe(label);
  return "ova__" + std::string(label) + ".clf";
}

std::string serialize(const multiclass::PairClassifier& c) {
  std::string out(kClassifierHeader);
  out += "\nfeatures " + std::to_string(c.features.size()) + "\n";
  for (const auto& f : c.features) out += serialize(f) + "\n";
  out += boosting::serialize(c.strong);
  return out;
}

multiclass::PairClassifier parse_pair_classifier(std::string_view text_in) {
  const auto lines = lines_of(text_in);
  if (lines.empty() || lines[0] != kClassifierHeader) {
    throw FormatError("classifier file: missing header '" + std::string(kClassifierHeader) + "'");
  }
  if (lines.size() < 2) throw FormatError("classifier file: truncated");
  const auto head = text::split_whitespace(lines[1]);
  if (head.size() != 2 || head[0] != "features") throw FormatError("classifier file: expected 'features <count>'");
  const auto count = text::parse_int(head[1], "feature count");
  if (count < 0 || static_cast<std::size_t>(count) + 2 > lines.size()) {
    throw FormatError("classifier file: feature count exceeds the file");
  }
  multiclass::PairClassifier c;
  for (long long k = 0; k < count; ++k) c.features.push_back(parse_descriptor(lines[2 + static_cast<std::size_t>(k)]));
  c.strong = boosting::parse_strong_classifier(std::span(lines).subspan(2 + static_cast<std::size_t>(count)));
  for (const auto& r : c.strong.rounds) {
    if (r.stump.feature_index >= c.features.size()) {
      throw FormatError("classifier file: stump references feature " + std::to_string(r.stump.feature_index) +
                        " of " + std::to_string(c.features.size()));
    }
  }
  return c;
}

void save_model(const multiclass::MulticlassModel& model, const std::filesystem::path& dir) {
  model.validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create model directory " + dir.string() + ": " + ec.message());

  const auto& labels = model.phone_set.labels();
  const std::size_t n = labels.size();
  std::string manifest(kManifestHeader);
  manifest += "\nphones";
  for (const auto& l : labels) manifest += " " + l;
  manifest += "\n";
  for (const auto& g : model.phone_set.groups()) {
    manifest += "group";
    for (const auto& m : g) manifest += " " + m;
    manifest += "\n";
  }
  for (const auto& line : text::split(model.config.serialize(), '\n')) {
    if (!text::trim(line).empty()) manifest += "config " + line + "\n";
  }
  manifest += "resolved clip_reference " + text::format_double(model.resolved.clip_reference) + "\n";
  manifest += "resolved mean_duration " + text::format_double(model.resolved.mean_duration) + "\n";
  manifest += "resolved image_bands " + std::to_string(model.resolved.image_bands) + "\n";
  manifest += "resolved image_columns " + std::to_string(model.resolved.image_columns) + "\n";
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::string name = pair_file_name(labels[a], labels[b]);
      text::write_file(dir / name, serialize(model.pair(a, b)));
      manifest += "pair " + labels[a] + " " + labels[b] + " " + name + "\n";
    }
  }
  for (std::size_t a = 0; a < model.one_vs_all.size(); ++a) {
    const std::string name = ova_file_name(labels[a]);
    text::write_file(dir / name, serialize(model.one_vs_all[a]));
    manifest += "ova " + labels[a] + " " + name + "\n";
  }
  text::write_file(dir / "manifest.txt", manifest);
}

multiclass::MulticlassModel load_model(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.txt";
  if (!std::filesystem::exists(manifest_path)) throw IoError("model manifest not found: " + manifest_path.string());
  const auto lines = lines_of(text::read_file(manifest_path));
  if (lines.empty() || lines[0] != kManifestHeader) {
    throw FormatError("model manifest: missing header '" + std::string(kManifestHeader) + "'");
  }
  std::vector<std::string> labels;
  std::vector<std::vector<std::string>> groups;
  std::string config_text;
  multiclass::MulticlassModel model;
  struct FileRef {
    std::string a, b, file;
  };
  std::vector<FileRef> pairs, ovas;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = text::split_whitespace(lines[i]);
    const std::string& key = fields[0];
    if (key == "phones") {
      labels.assign(fields.begin() + 1, fields.end());
    } else if (key == "group") {
      groups.emplace_back(fields.begin() + 1, fields.end());
    } else if (key == "config") {
      config_text += lines[i].substr(lines[i].find(' ') + 1) + "\n";
    } else if (key == "resolved" && fields.size() == 3) {
      if (fields[1] == "clip_reference") model.resolved.clip_reference = text::parse_double(fields[2], "clip_reference");
      else if (fields[1] == "mean_duration") model.resolved.mean_duration = text::parse_double(fields[2], "mean_duration");
      else if (fields[1] == "image_bands") model.resolved.image_bands = static_cast<std::size_t>(text::parse_int(fields[2], "image_bands"));
      else if (fields[1] == "image_columns") model.resolved.image_columns = static_cast<std::size_t>(text::parse_int(fields[2], "image_columns"));
      else throw FormatError("model manifest: unknown resolved value '" + fields[1] + "'");
    } else if (key == "pair" && fields.size() == 4) {
      pairs.push_back({fields[1], fields[2], fields[3]});
    } else if (key == "ova" && fields.size() == 3) {
      ovas.push_back({fields[1], "", fields[2]});
    } else {
      throw FormatError("model manifest line " + std::to_string(i + 1) + ": unrecognized '" + lines[i] + "'");
    }
  }
  model.phone_set = PhoneSet(labels, groups);
  model.config = parse_config(config_text);

  const std::size_t n = labels.size();
  model.pairwise.resize(multiclass::pair_count(n));
  std::vector<bool> seen(model.pairwise.size(), false);
  auto read_classifier = [&](const std::string& file) {
    const auto path = dir / file;
    if (!std::filesystem::exists(path)) throw IoError("model is missing classifier file " + path.string());
    try {
      return parse_pair_classifier(text::read_file(path));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  };
  for (const auto& ref : pairs) {
    const std::size_t a = model.phone_set.index_of(ref.a);
    const std::size_t b = model.phone_set.index_of(ref.b);
    if (a >= b) throw FormatError("model manifest: pair " + ref.a + "/" + ref.b + " is not in label order");
    const std::size_t slot = multiclass::pair_slot(n, a, b);
    model.pairwise[slot] = read_classifier(ref.file);
    seen[slot] = true;
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!seen[multiclass::pair_slot(n, a, b)]) {
        throw IoError("model is missing classifier file " + (dir / pair_file_name(labels[a], labels[b])).string());
      }
    }
  }
  if (!ovas.empty()) {
    model.one_vs_all.resize(n);
    std::vector<bool> have(n, false);
    for (const auto& ref : ovas) {
      const std::size_t a = model.phone_set.index_of(ref.a);
      model.one_vs_all[a] = read_classifier(ref.file);
      have[a] = true;
    }
    for (std::size_t a = 0; a < n; ++a) {
      if (!have[a]) throw IoError("model is missing classifier file " + (dir / ova_file_name(labels[a])).string());
    }
  }
  model.validate();
  return model;
}

}  // namespace phoneboost
