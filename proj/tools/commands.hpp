#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace phoneboost::cli {

struct TrainArgs {
  std::filesystem::path corpus;
  std::filesystem::path config;
  std::filesystem::path model;
  bool one_vs_all = false;
  std::vector<std::string> overrides;  ///< "key=value"
};

struct ClassifyArgs {
  std::filesystem::path model;
  std::filesystem::path audio;
  std::filesystem::path segmentation;
  std::string voting = "ava";
};

struct EvalArgs {
  std::filesystem::path model;
  std::filesystem::path corpus;
  std::string report = "accuracy";
  std::filesystem::path output;  ///< empty: print to standard output
  std::string voting = "ava";
  std::string pair;  ///< "a,b"; defaults to the first two phones
  std::vector<std::size_t> sizes{10, 50, 200};
  std::size_t trials = 3;
  std::vector<double> margins{0.03, 0.04, 0.06, 0.08};
};

struct SynthArgs {
  std::filesystem::path spec;
  std::filesystem::path output;
  std::size_t n_per_class = 0;
  std::size_t test_per_class = 0;  ///< 0: same as n_per_class
};

struct RenderArgs {
  std::filesystem::path audio;
  std::filesystem::path output;
  std::filesystem::path config;  ///< optional
  std::string stage = "log";     ///< power or log
};

int cmd_train(const TrainArgs& args, std::ostream& out);
int cmd_classify(const ClassifyArgs& args, std::ostream& out);
int cmd_eval(const EvalArgs& args, std::ostream& out);
int cmd_synth(const SynthArgs& args, std::ostream& out);
int cmd_render(const RenderArgs& args, std::ostream& out);

/// Parses arguments and dispatches. Library errors are reported on `err`
/// with exit status 1; usage errors exit with 2.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phoneboost::cli
