#include <gtest/gtest.h>

#include <cmath>

#include "phoneboost/error.hpp"
#include "phoneboost/features.hpp"
#include "test_support.hpp"

namespace pb = phoneboost;
using pb::FeatureFamily;
using pb::LengthMode;

namespace {

std::vector<pb::CorpusItem> tone_items(std::size_t n) {
  return pb::testing::synth_corpus(pb::testing::two_tone_spec(500, 2500), n, 0).items;
}

pb::PipelineConfig config_for(LengthMode mode, FeatureFamily family) {
  pb::PipelineConfig c;
  c.length_mode = mode;
  c.features = family;
  c.haar_scales = {1, 2};
  return c;
}

}  // namespace

TEST(Pipeline, FitResolvesClipReferenceAndMeanDuration) {
  const auto items = tone_items(6);
  const auto p = pb::FeaturePipeline::fit(pb::PipelineConfig{}, items);
  double mean = 0.0, peak = -1e300;
  for (const auto& item : items) {
    mean += item.segment.length() / 16000.0;
    for (double v : p.log_mel(item).values()) peak = std::max(peak, v);
  }
  EXPECT_NEAR(p.resolved().mean_duration, mean / items.size(), 1e-12);
  EXPECT_EQ(p.resolved().clip_reference, peak);
  EXPECT_EQ(p.resolved().image_bands, 14u);
  EXPECT_EQ(p.resolved().image_columns, 15u);
  EXPECT_THROW(pb::FeaturePipeline::fit(pb::PipelineConfig{}, {}), pb::InvalidArgument);
}

TEST(Pipeline, RenderedGeometryPerLengthMode) {
  const auto items = tone_items(4);
  struct Case {
    LengthMode mode;
    FeatureFamily family;
    std::size_t bands;
  };
  for (const Case& c : {Case{LengthMode::exact_warp, FeatureFamily::haar, 14},
                        Case{LengthMode::fixed_center, FeatureFamily::haar, 14},
                        Case{LengthMode::stacked_frames, FeatureFamily::haar, 42},
                        Case{LengthMode::hog_pooled, FeatureFamily::hog_svm, 42}}) {
    const auto p = pb::FeaturePipeline::fit(config_for(c.mode, c.family), items);
    for (const auto& item : items) {
      const auto img = p.render(item);
      EXPECT_EQ(img.bands(), c.bands) << pb::to_string(c.mode);
      EXPECT_EQ(img.stage(), pb::SpectrogramStage::normalized);
      for (double v : img.values()) {
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
      }
      if (c.mode == LengthMode::hog_pooled) {
        EXPECT_GE(img.columns(), 15u);
      } else {
        EXPECT_EQ(img.columns(), 15u);
      }
    }
  }
}

TEST(Pipeline, MarginsScaleColumnsByMeanDuration) {
  const auto items = tone_items(5);
  auto cfg = config_for(LengthMode::margins, FeatureFamily::haar);
  cfg.margin = 0.03;
  const auto p = pb::FeaturePipeline::fit(cfg, items);
  const double mean = p.resolved().mean_duration;
  EXPECT_EQ(p.resolved().image_columns, static_cast<std::size_t>(std::llround(15 * (mean + 0.06) / mean)));
  EXPECT_GT(p.resolved().image_columns, 15u);
  EXPECT_EQ(p.render(items[0]).columns(), p.resolved().image_columns);
}

TEST(Pipeline, TrainingPeakMapsToTheTopOfTheRange) {
  const auto items = tone_items(5);
  const auto p = pb::FeaturePipeline::fit(pb::PipelineConfig{}, items);
  double top = 0.0;
  for (const auto& item : items) {
    pb::dsp::ClipRange clip{p.resolved().clip_reference - 6, p.resolved().clip_reference};
    for (double v : pb::dsp::normalize(p.log_mel(item), clip).values()) top = std::max(top, v);
  }
  EXPECT_EQ(top, 1.0);
}

TEST(Pipeline, GeometryMismatchIsReported) {
  const auto items = tone_items(3);
  const auto p = pb::FeaturePipeline::fit(pb::PipelineConfig{}, items);
  auto recording = std::make_shared<pb::Recording>(*items[0].recording);
  recording->sample_rate = 8000;
  const pb::CorpusItem other{recording, items[0].segment};
  try {
    p.render(other);
    FAIL() << "expected a geometry mismatch";
  } catch (const pb::ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("geometry mismatch"), std::string::npos);
  }
}

TEST(Pipeline, ShortSegmentsStillRender) {
  auto items = tone_items(3);
  const auto p = pb::FeaturePipeline::fit(pb::PipelineConfig{}, items);
  pb::CorpusItem tiny = items[0];
  tiny.segment.end = tiny.segment.start + 20;
  EXPECT_EQ(p.render(tiny).columns(), 15u);
}

TEST(Mfcc, FlattenedLayoutIsColumnThenPart) {
  const auto items = tone_items(3);
  const auto p = pb::FeaturePipeline::fit(config_for(LengthMode::exact_warp, FeatureFamily::mfcc_stump), items);
  const auto prepared = p.prepare(items[0]);
  ASSERT_EQ(prepared.mfcc.size(), 3u * 12u * 15u);
  const auto log = pb::dsp::warp(p.log_mel(items[0]), 14, 15);
  const auto frames = pb::dsp::deltas(pb::dsp::mfcc(log, 12), 2);
  for (std::size_t column : {0u, 7u, 14u}) {
    const pb::MfccFeature c{pb::MfccFeature::Part::c, 3, column};
    const pb::MfccFeature d{pb::MfccFeature::Part::d, 0, column};
    const pb::MfccFeature dd{pb::MfccFeature::Part::dd, 11, column};
    EXPECT_EQ(pb::evaluate(c, prepared, p.config()), frames[column].coefficients[3]);
    EXPECT_EQ(pb::evaluate(d, prepared, p.config()), frames[column].delta[0]);
    EXPECT_EQ(pb::evaluate(dd, prepared, p.config()), frames[column].delta_delta[11]);
  }
  EXPECT_THROW(pb::evaluate(pb::MfccFeature{pb::MfccFeature::Part::c, 12, 0}, prepared, p.config()),
               pb::InvalidArgument);
}

TEST(Descriptors, RoundTripAllFamilies) {
  pb::hog::HogSvmFeature h;
  h.patch = {1, 2, 4, 2};
  h.weights[3] = -0.125;
  h.bias = 1.5;
  const std::vector<pb::FeatureDescriptor> ds{
      pb::haar::HaarFeature{pb::haar::Kind::line_vertical, 1, 2, 6, 2},
      h,
      pb::MfccFeature{pb::MfccFeature::Part::dd, 4, 9},
  };
  for (const auto& d : ds) {
    const auto back = pb::parse_descriptor(pb::serialize(d));
    EXPECT_EQ(back.index(), d.index());
    EXPECT_EQ(pb::serialize(back), pb::serialize(d));
  }
  EXPECT_EQ(pb::serialize(ds[2]), "mfcc dd 4 9");
  EXPECT_THROW(pb::parse_descriptor("mfcc x 1 1"), pb::FormatError);
  EXPECT_THROW(pb::parse_descriptor("blob 1"), pb::FormatError);
  EXPECT_THROW(pb::parse_descriptor(""), pb::FormatError);
}

TEST(Candidates, HaarMatrixMatchesDirectEvaluation) {
  const auto items = tone_items(4);
  const auto p = pb::FeaturePipeline::fit(config_for(LengthMode::exact_warp, FeatureFamily::haar), items);
  std::vector<pb::PreparedSample> prepared;
  for (const auto& item : items) prepared.push_back(p.prepare(item));
  std::vector<pb::LabeledSample> samples;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    samples.push_back({&prepared[i], items[i].segment.label == "a" ? -1 : 1});
  }
  const auto set = pb::build_candidates(p, samples, 1);
  EXPECT_EQ(set.candidates.size(), pb::haar::enumerate_haar(14, 15, {1, 2}).size());
  for (std::size_t f = 0; f < set.candidates.size(); f += 97) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      EXPECT_EQ(set.matrix.value(i, f), pb::evaluate(set.candidates[f], prepared[i], p.config()));
    }
  }
  std::vector<pb::LabeledSample> one_sided(samples.begin(), samples.begin() + 1);
  EXPECT_THROW(pb::build_candidates(p, one_sided, 1), pb::InvalidArgument);
}

TEST(Candidates, HogPooledPatchesReplicatePerCopy) {
  auto cfg = config_for(LengthMode::hog_pooled, FeatureFamily::hog_svm);
  pb::ResolvedPipeline r;
  r.image_bands = 42;
  const auto patches = pb::pipeline_patches(cfg, r);
  const auto base = pb::hog::enumerate_hog(14, 15);
  ASSERT_EQ(patches.size(), 3 * base.size());
  EXPECT_EQ(patches[base.size()].band, base[0].band + 14);
  cfg.hog_smoothing = false;
  EXPECT_EQ(pb::pipeline_patches(cfg, r).size(), base.size());
}

TEST(Candidates, HogValuesMatchDescriptorEvaluation) {
  const auto items = tone_items(4);
  for (auto mode : {LengthMode::exact_warp, LengthMode::hog_pooled}) {
    const auto p = pb::FeaturePipeline::fit(config_for(mode, FeatureFamily::hog_svm), items);
    std::vector<pb::PreparedSample> prepared;
    for (const auto& item : items) prepared.push_back(p.prepare(item));
    std::vector<pb::LabeledSample> samples;
    for (std::size_t i = 0; i < prepared.size(); ++i) {
      samples.push_back({&prepared[i], items[i].segment.label == "a" ? -1 : 1});
    }
    const auto set = pb::build_candidates(p, samples, 4);
    for (std::size_t f = 0; f < set.candidates.size(); f += 53) {
      for (std::size_t i = 0; i < samples.size(); ++i) {
        EXPECT_NEAR(set.matrix.value(i, f), pb::evaluate(set.candidates[f], prepared[i], p.config()), 1e-12);
      }
    }
  }
}
