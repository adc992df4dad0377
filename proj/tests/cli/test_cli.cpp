#include <gtest/gtest.h>

#include <fstream>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "phoneboost/eval.hpp"
#include "phoneboost/text.hpp"
#include "test_support.hpp"

namespace pb = phoneboost;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "phoneboost");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = pb::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

constexpr const char* kThreeClassSpec = R"({
  "sample_rate": 16000,
  "seed": 77,
  "context_ms": 100,
  "classes": [
    {"label": "lo", "duration_ms": [70, 120], "formants": [{"hz": 500, "amplitude": 0.3}],
     "jitter": {"frequency_hz": 40, "amplitude": 0.2, "gain_db": 4}},
    {"label": "hi", "duration_ms": [70, 120], "formants": [{"hz": 3000, "amplitude": 0.3}],
     "jitter": {"frequency_hz": 40, "amplitude": 0.2, "gain_db": 4}},
    {"label": "ns", "duration_ms": [70, 120], "noise": {"low_hz": 5000, "high_hz": 7500, "amplitude": 0.15},
     "jitter": {"amplitude": 0.2, "gain_db": 4}}
  ]
})";

std::string slurp(const fs::path& p) { return pb::text::read_file(p); }

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& l : pb::text::split(s, '\n')) {
    if (!pb::text::trim(l).empty()) out.emplace_back(l);
  }
  return out;
}

class CliModel : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = std::make_unique<pb::testing::TempDir>("cli");
    pb::text::write_file(*dir_ / "three.json", kThreeClassSpec);
    const auto synth = run({"synth", (*dir_ / "three.json").string(), (*dir_ / "corpus").string(), "12",
                            "--test-per-class", "8"});
    ASSERT_EQ(synth.status, 0) << synth.err;
    const auto train = run({"train", corpus().string(), config().string(), model().string(), "--set", "rounds=12",
                            "--set", "haar_scales=1,2"});
    ASSERT_EQ(train.status, 0) << train.err;
    train_out_ = train.out;
  }
  static void TearDownTestSuite() { dir_.reset(); }

  static fs::path corpus() { return *dir_ / "corpus"; }
  static fs::path model() { return *dir_ / "model"; }
  static fs::path config() { return pb::testing::source_dir() / "configs" / "default.cfg"; }

  static std::unique_ptr<pb::testing::TempDir> dir_;
  static std::string train_out_;
};

std::unique_ptr<pb::testing::TempDir> CliModel::dir_;
std::string CliModel::train_out_;

}  // namespace

TEST(Cli, UsageErrorsReturnTwo) {
  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"frobnicate"}).status, 2);
  const auto r = run({"train", "only-one-arg"});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("phoneboost:"), std::string::npos);
}

TEST(Cli, SynthWritesDiscoverableCorpus) {
  pb::testing::TempDir dir("cli_synth");
  const auto spec = pb::testing::synth_spec_path("four_class.json").string();
  ASSERT_EQ(run({"synth", spec, (dir / "a").string(), "10", "--test-per-class", "1"}).status, 0);
  ASSERT_EQ(run({"synth", spec, (dir / "b").string(), "10", "--test-per-class", "1"}).status, 0);
  std::size_t phn = 0;
  for (const auto& e : fs::directory_iterator(dir / "a" / "train")) {
    if (e.path().extension() == ".phn") ++phn;
    EXPECT_EQ(slurp(e.path()), slurp(dir / "b" / "train" / e.path().filename())) << e.path();
  }
  EXPECT_EQ(phn, 40u);
  EXPECT_TRUE(fs::exists(dir / "a" / "phones.txt"));
}

TEST(Cli, SynthRejectsFormantAboveNyquist) {
  pb::testing::TempDir dir("cli_nyq");
  pb::text::write_file(dir / "bad.json", R"({"sample_rate": 8000, "classes": [
    {"label": "x", "duration_ms": [50, 60], "formants": [{"hz": 5000, "amplitude": 0.3}]}]})");
  const auto r = run({"synth", (dir / "bad.json").string(), (dir / "out").string(), "2"});
  EXPECT_EQ(r.status, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, HogPooledWithHaarFailsBeforeWork) {
  pb::testing::TempDir dir("cli_bad");
  const auto r = run({"train", (dir / "no-corpus").string(),
                      (pb::testing::source_dir() / "configs" / "default.cfg").string(), (dir / "m").string(), "--set",
                      "length_mode=hog-pooled"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("hog-pooled"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "m"));
}

TEST_F(CliModel, TrainWritesOneFilePerPair) {
  std::size_t clf = 0;
  for (const auto& e : fs::directory_iterator(model())) clf += e.path().extension() == ".clf";
  EXPECT_EQ(clf, 3u);
  EXPECT_TRUE(fs::exists(model() / "manifest.txt"));
  EXPECT_NE(train_out_.find("wrote 3 classifiers"), std::string::npos);
}

TEST_F(CliModel, RetrainIsByteIdentical) {
  const fs::path again = *dir_ / "model_again";
  ASSERT_EQ(run({"train", corpus().string(), config().string(), again.string(), "--set", "rounds=12", "--set",
                 "haar_scales=1,2"})
                .status,
            0);
  for (const auto& e : fs::directory_iterator(model())) {
    EXPECT_EQ(slurp(e.path()), slurp(again / e.path().filename())) << e.path().filename();
  }
}

TEST_F(CliModel, ClassifiesTrainingSegments) {
  std::size_t total = 0, right = 0;
  for (const auto& e : fs::directory_iterator(corpus() / "train")) {
    if (e.path().extension() != ".wav") continue;
    auto phn = e.path();
    phn.replace_extension(".phn");
    const auto r = run({"classify", model().string(), e.path().string(), phn.string()});
    ASSERT_EQ(r.status, 0) << r.err;
    for (const auto& line : lines_of(r.out)) {
      const auto tokens = pb::text::split_whitespace(line);
      ASSERT_EQ(tokens.size(), 4u) << line;
      ++total;
      right += tokens[2] == tokens[3];
    }
  }
  EXPECT_EQ(total, 36u);
  EXPECT_GT(static_cast<double>(right) / static_cast<double>(total), 0.95);
}

TEST_F(CliModel, UnlabeledSegmentationOmitsTrueLabel) {
  const auto wav = corpus() / "test" / "hi_00000.wav";
  const auto labeled = lines_of(slurp(corpus() / "test" / "hi_00000.phn"));
  ASSERT_EQ(labeled.size(), 1u);
  const auto tokens = pb::text::split_whitespace(labeled[0]);
  pb::text::write_file(*dir_ / "bare.phn", std::string(tokens[0]) + " " + std::string(tokens[1]) + "\n");
  const auto r = run({"classify", model().string(), wav.string(), (*dir_ / "bare.phn").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto out = lines_of(r.out);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(pb::text::split_whitespace(out[0]).size(), 3u);
}

TEST_F(CliModel, HierarchicalWithAllPhonesMatchesAllVsAll) {
  for (const auto& e : fs::directory_iterator(corpus() / "test")) {
    if (e.path().extension() != ".wav") continue;
    auto phn = e.path();
    phn.replace_extension(".phn");
    const auto ava = run({"classify", model().string(), e.path().string(), phn.string(), "--voting", "ava"});
    const auto hier = run({"classify", model().string(), e.path().string(), phn.string(), "--voting", "hier:3"});
    ASSERT_EQ(ava.status, 0) << ava.err;
    EXPECT_EQ(ava.out, hier.out);
  }
}

TEST_F(CliModel, MissingPairFileIsNamed) {
  const fs::path broken = *dir_ / "broken";
  fs::copy(model(), broken);
  fs::path victim;
  for (const auto& e : fs::directory_iterator(broken)) {
    if (e.path().extension() == ".clf") victim = e.path();
  }
  fs::remove(victim);
  const auto wav = corpus() / "test" / "lo_00000.wav";
  const auto r = run({"classify", broken.string(), wav.string(), (corpus() / "test" / "lo_00000.phn").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find(victim.filename().string()), std::string::npos) << r.err;
}

TEST_F(CliModel, GeometryMismatchIsAnError) {
  pb::testing::TempDir dir("cli_rate");
  pb::text::write_file(dir / "slow.json", R"({"sample_rate": 8000, "seed": 1, "classes": [
    {"label": "lo", "duration_ms": [80, 90], "formants": [{"hz": 500, "amplitude": 0.3}]}]})");
  ASSERT_EQ(run({"synth", (dir / "slow.json").string(), (dir / "c").string(), "1"}).status, 0);
  const auto r = run({"classify", model().string(), (dir / "c" / "train" / "lo_00000.wav").string(),
                      (dir / "c" / "train" / "lo_00000.phn").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliModel, AccuracyReportHasTwoMetrics) {
  const auto r = run({"eval", model().string(), corpus().string(), "--report", "accuracy"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto lines = lines_of(r.out);
  std::size_t metrics = 0;
  for (const auto& l : lines) metrics += l.rfind("metric", 0) == 0;
  EXPECT_EQ(metrics, 2u) << r.out;
}

TEST_F(CliModel, ConfusionReportHasOneRowPerPhone) {
  const fs::path path = *dir_ / "confusion.txt";
  const auto r = run({"eval", model().string(), corpus().string(), "--report", "confusion", "--output", path.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto report = pb::eval::parse_report(slurp(path));
  ASSERT_EQ(report.tables.size(), 1u);
  EXPECT_EQ(report.tables[0].rows.size(), 3u);

  const fs::path csv = *dir_ / "confusion.csv";
  ASSERT_EQ(run({"eval", model().string(), corpus().string(), "--report", "confusion", "--output", csv.string()}).status,
            0);
  EXPECT_NE(slurp(csv).find(','), std::string::npos);
}

TEST_F(CliModel, ExperimentReports) {
  const auto rounds = run({"eval", model().string(), corpus().string(), "--report", "rounds", "--pair", "hi,lo"});
  ASSERT_EQ(rounds.status, 0) << rounds.err;
  const auto curve = pb::eval::parse_report(rounds.out);
  EXPECT_EQ(curve.kind, "rounds");
  ASSERT_FALSE(curve.series.empty());
  EXPECT_EQ(curve.series[0].x.size(), 12u);

  const auto m = run({"eval", model().string(), corpus().string(), "--report", "margins", "--pair", "lo,ns"});
  ASSERT_EQ(m.status, 0) << m.err;
  EXPECT_EQ(pb::eval::parse_report(m.out).find_table("margins").rows.size(), 4u);

  const auto learning = run({"eval", model().string(), corpus().string(), "--report", "learning", "--pair", "lo,hi",
                             "--sizes", "4,8", "--trials", "2"});
  ASSERT_EQ(learning.status, 0) << learning.err;
  EXPECT_EQ(pb::eval::parse_report(learning.out).kind, "learning");

  const auto bad = run({"eval", model().string(), corpus().string(), "--report", "nonsense"});
  EXPECT_EQ(bad.status, 1);
}

TEST_F(CliModel, RenderWritesGrid) {
  const fs::path grid = *dir_ / "grid.txt";
  const auto r = run({"render", (corpus() / "test" / "ns_00001.wav").string(), grid.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto lines = lines_of(slurp(grid));
  EXPECT_FALSE(lines.empty());
}
