#include "commands.hpp"

#include <CLI11.hpp>
#include <ostream>

#include "phoneboost/config.hpp"
#include "phoneboost/corpus.hpp"
#include "phoneboost/dsp.hpp"
#include "phoneboost/error.hpp"
#include "phoneboost/eval.hpp"
#include "phoneboost/model_io.hpp"
#include "phoneboost/multiclass.hpp"
#include "phoneboost/segmentation.hpp"
#include "phoneboost/synth.hpp"
#include "phoneboost/text.hpp"
#include "phoneboost/wav.hpp"

namespace phoneboost::cli {

namespace {

PipelineConfig config_with_overrides(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  PipelineConfig c = path.empty() ? PipelineConfig{} : load_config(path);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ValidationError("override '" + o + "' is not key=value");
    set_config_value(c, text::trim(std::string_view(o).substr(0, eq)), text::trim(std::string_view(o).substr(eq + 1)));
  }
  c.validate();
  return c;
}

eval::PairSpec parse_pair(const std::string& text_in, const PhoneSet& set) {
  if (text_in.empty()) {
    if (set.size() < 2) throw ValidationError("corpus needs at least two phones");
    return {set.labels()[0], set.labels()[1]};
  }
  const auto parts = text::split(text_in, ',');
  if (parts.size() != 2) throw ValidationError("--pair expects a,b");
  eval::PairSpec p{std::string(text::trim(parts[0])), std::string(text::trim(parts[1]))};
  set.index_of(p.a);
  set.index_of(p.b);
  return p;
}

std::vector<eval::Prediction> predict_corpus(const multiclass::MulticlassModel& model, const Corpus& corpus,
                                             const multiclass::VotingScheme& scheme) {
  const FeaturePipeline pipeline = model.pipeline();
  const auto prepared = multiclass::prepare_corpus(pipeline, model.phone_set, corpus.items);
  std::vector<eval::Prediction> preds;
  preds.reserve(prepared.samples.size());
  for (std::size_t i = 0; i < prepared.samples.size(); ++i) {
    const auto c = multiclass::classify(model, prepared.samples[i], scheme);
    preds.push_back({model.phone_set.labels()[prepared.labels[i]], model.phone_set.labels()[c.label]});
  }
  return preds;
}

}  // namespace

int cmd_train(const TrainArgs& args, std::ostream& out) {
  const PipelineConfig config = config_with_overrides(args.config, args.overrides);
  const Corpus corpus = load_corpus(args.corpus, Split::train);
  out << "corpus: " << corpus.items.size() << " segments, " << corpus.phone_set.size() << " phones\n";
  multiclass::TrainOptions options;
  options.one_vs_all = args.one_vs_all;
  options.log = [&](const std::string& line) { out << line << "\n"; };
  const auto model = multiclass::train_model(config, corpus, options);
  save_model(model, args.model);
  out << "wrote " << model.pairwise.size() + model.one_vs_all.size() << " classifiers to " << args.model.string()
      << "\n";
  return 0;
}

int cmd_classify(const ClassifyArgs& args, std::ostream& out) {
  const auto scheme = multiclass::parse_voting(args.voting);
  const auto model = load_model(args.model);
  const FeaturePipeline pipeline = model.pipeline();
  auto recording = std::make_shared<const Recording>(read_wav(args.audio));
  SegmentationOptions seg_options;
  seg_options.allow_unlabeled = true;
  const auto segments = read_segmentation(args.segmentation, model.phone_set, seg_options);
  for (const auto& segment : segments) {
    const auto sample = pipeline.prepare(CorpusItem{recording, segment});
    const auto c = multiclass::classify(model, sample, scheme);
    out << segment.start << " " << segment.end << " ";
    if (!segment.label.empty()) out << segment.label << " ";
    out << model.phone_set.labels()[c.label] << "\n";
  }
  return 0;
}

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  const auto model = load_model(args.model);
  const auto scheme = multiclass::parse_voting(args.voting);
  eval::ExperimentReport report;
  if (args.report == "accuracy" || args.report == "confusion") {
    const Corpus test = load_corpus(args.corpus, Split::test);
    const auto preds = predict_corpus(model, test, scheme);
    report = args.report == "accuracy" ? eval::accuracy_report(preds, model.phone_set)
                                       : eval::confusion_report(eval::confusion(preds, model.phone_set));
  } else if (args.report == "rounds") {
    const Corpus train = load_corpus(args.corpus, Split::train);
    const Corpus test = load_corpus(args.corpus, Split::test);
    const auto pair = parse_pair(args.pair, model.phone_set);
    std::size_t a = model.phone_set.index_of(pair.a), b = model.phone_set.index_of(pair.b);
    if (a > b) std::swap(a, b);
    const FeaturePipeline pipeline = model.pipeline();
    const eval::PairSpec ordered{model.phone_set.labels()[a], model.phone_set.labels()[b]};
    const auto train_items = eval::pair_items(train, ordered);
    const auto test_items = eval::pair_items(test, ordered);
    const auto train_corpus = multiclass::prepare_corpus(pipeline, model.phone_set, train_items);
    const auto test_corpus = multiclass::prepare_corpus(pipeline, model.phone_set, test_items);
    report = eval::rounds_curve(model.pair(a, b), model.config, eval::binary_data(train_corpus, a, b),
                                eval::binary_data(test_corpus, a, b));
  } else if (args.report == "learning" || args.report == "margins") {
    const Corpus train = load_corpus(args.corpus, Split::train);
    const Corpus test = load_corpus(args.corpus, Split::test);
    const auto pair = parse_pair(args.pair, train.phone_set);
    report = args.report == "learning" ? eval::learning_curve(model.config, train, test, pair, args.sizes, args.trials)
                                       : eval::margin_sweep(model.config, train, test, pair, args.margins);
  } else {
    throw ValidationError("unknown report '" + args.report + "' (expected accuracy|confusion|rounds|learning|margins)");
  }
  if (args.output.empty()) {
    out << eval::to_text(report);
  } else {
    eval::write_report(args.output, report);
    out << "wrote " << args.report << " report to " << args.output.string() << "\n";
  }
  return 0;
}

int cmd_synth(const SynthArgs& args, std::ostream& out) {
  const SynthSpec spec = load_synth_spec(args.spec);
  const std::size_t n_test = args.test_per_class ? args.test_per_class : args.n_per_class;
  write_synth_corpus(spec, args.output, args.n_per_class, n_test);
  out << "wrote " << spec.classes.size() * args.n_per_class << " training and " << spec.classes.size() * n_test
      << " test segments to " << args.output.string() << "\n";
  return 0;
}

int cmd_render(const RenderArgs& args, std::ostream& out) {
  const PipelineConfig config = config_with_overrides(args.config, {});
  const Recording recording = read_wav(args.audio);
  if (recording.sample_rate != config.sample_rate) {
    throw ValidationError("recording sampled at " + std::to_string(recording.sample_rate) + " Hz, config expects " +
                          std::to_string(config.sample_rate) + " Hz");
  }
  Spectrogram s = dsp::stft_power(recording.samples, config.stft());
  if (args.stage == "log") {
    const auto bank = dsp::build_mel_bank(config.mel_bands, config.frame_length / 2 + 1, config.sample_rate,
                                          config.f_min, config.f_max);
    s = dsp::log_compress(dsp::apply_mel(s, bank));
  } else if (args.stage != "power") {
    throw ValidationError("unknown stage '" + args.stage + "' (expected power or log)");
  }
  write_text_grid(args.output, s);
  out << "wrote " << s.bands() << "x" << s.columns() << " grid to " << args.output.string() << "\n";
  return 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phone classification with boosted spectrogram features"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train all pairwise classifiers and write a model directory");
  train_cmd->add_option("corpus", train.corpus, "Corpus root (train/ split)")->required();
  train_cmd->add_option("config", train.config, "Pipeline config file")->required();
  train_cmd->add_option("model", train.model, "Output model directory")->required();
  train_cmd->add_flag("--ova", train.one_vs_all, "Also train one-vs-all classifiers");
  train_cmd->add_option("--set", train.overrides, "Config override key=value (repeatable)");

  ClassifyArgs classify;
  auto* classify_cmd = app.add_subcommand("classify", "Label the segments of one recording");
  classify_cmd->add_option("model", classify.model, "Model directory")->required();
  classify_cmd->add_option("audio", classify.audio, "WAV file")->required();
  classify_cmd->add_option("segmentation", classify.segmentation, "Segmentation file")->required();
  classify_cmd->add_option("--voting", classify.voting, "ava, hier:N1 or ova");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Score a model or run an experiment on a corpus");
  eval_cmd->add_option("model", ev.model, "Model directory")->required();
  eval_cmd->add_option("corpus", ev.corpus, "Corpus root")->required();
  eval_cmd->add_option("--report", ev.report, "accuracy|confusion|rounds|learning|margins");
  eval_cmd->add_option("--output", ev.output, "Report file (.csv for comma-separated)");
  eval_cmd->add_option("--voting", ev.voting, "ava, hier:N1 or ova");
  eval_cmd->add_option("--pair", ev.pair, "Phone pair a,b for rounds/learning/margins");
  eval_cmd->add_option("--sizes", ev.sizes, "Per-class training sizes for learning curves")->delimiter(',');
  eval_cmd->add_option("--trials", ev.trials, "Trials per learning-curve size");
  eval_cmd->add_option("--margins", ev.margins, "Margins in seconds")->delimiter(',');

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth_cmd->add_option("spec", synth.spec, "Synth spec (JSON)")->required();
  synth_cmd->add_option("output", synth.output, "Output directory")->required();
  synth_cmd->add_option("n_per_class", synth.n_per_class, "Training samples per class")->required()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--test-per-class", synth.test_per_class, "Test samples per class (default: n_per_class)");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Write a recording's spectrogram as a text grid");
  render_cmd->add_option("audio", render.audio, "WAV file")->required();
  render_cmd->add_option("output", render.output, "Text grid file")->required();
  render_cmd->add_option("--config", render.config, "Pipeline config file");
  render_cmd->add_option("--stage", render.stage, "power or log");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "phoneboost: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*train_cmd) return cmd_train(train, out);
    if (*classify_cmd) return cmd_classify(classify, out);
    if (*eval_cmd) return cmd_eval(ev, out);
    if (*synth_cmd) return cmd_synth(synth, out);
    if (*render_cmd) return cmd_render(render, out);
  } catch (const std::exception& e) {
    err << "phoneboost: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace phoneboost::cli
