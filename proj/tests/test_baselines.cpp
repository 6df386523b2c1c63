#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pap/baselines.hpp"
#include "pap/evaluator.hpp"
#include "pap/synth.hpp"

namespace pap {
namespace {

using testing::head_video;
using testing::small_vocab;

TEST(ModeTable, SingleVideoAllNone) {
  const std::vector<VideoAnnotation> train = {head_video({0, 0, 0}, 1)};
  const ModeTable table = fit_mode_table(train, small_vocab());
  EXPECT_EQ(table.at(1, PartGroup::kHead), (ModeEntry{0, 1.0, 3}));
  EXPECT_EQ(table.at(0, PartGroup::kHead), (ModeEntry{0, 0.0, 0}));
  EXPECT_EQ(table.at(1, PartGroup::kFoot).instances, 0);
}

TEST(ModeTable, ThreeToOne) {
  const std::vector<VideoAnnotation> train = {head_video({0, 1, 0, 0})};
  const ModeTable table = fit_mode_table(train, small_vocab());
  const ModeEntry& e = table.at(0, PartGroup::kHead);
  EXPECT_EQ(e.state, 0);
  EXPECT_DOUBLE_EQ(e.frequency, 0.75);
}

TEST(ModeTable, RejectsEmptyTraining) {
  EXPECT_THROW(fit_mode_table(std::vector<VideoAnnotation>{}, small_vocab()), std::invalid_argument);
}

SynthConfig config(double skew) {
  SynthConfig cfg;
  cfg.seed = 21;
  cfg.n_videos = 48;
  cfg.frames_per_video = 60;
  cfg.n_actions = 4;
  cfg.state_skew = skew;
  return cfg;
}

TEST(ModeTable, FrequenciesFollowSkew) {
  const Dataset d = generate_dataset(config(0.977)).dataset;
  const ModeTable table = fit_mode_table(d.videos, d.vocab);
  for (ActionId a = 0; a < 4; ++a) {
    for (PartGroup g : kAllPartGroups) {
      const ModeEntry& e = table.at(a, g);
      ASSERT_GT(e.instances, 1000);
      EXPECT_EQ(e.state, synthetic_modal_state(config(0.977), a, g));
      EXPECT_NEAR(e.frequency, 0.977, 0.01);
    }
  }
}

TEST(PredictMode, FullSkewIsPerfect) {
  const Dataset d = generate_dataset(config(1.0)).dataset;
  const EvaluationReport r = evaluate(d, predict_mode(fit_mode_table(d.videos, d.vocab), d), {});
  for (const VideoPsc& v : r.videos) EXPECT_EQ(v.psc, 1.0);
  EXPECT_EQ(r.roc_score, 1.0);
}

TEST(PredictMode, AccuracyEqualsWeightedTableFrequency) {
  const Dataset d = generate_dataset(config(0.6)).dataset;
  const ModeTable table = fit_mode_table(d.videos, d.vocab);
  const EvaluationReport r = evaluate(d, predict_mode(table, d), {});
  long correct = 0, total = 0;
  double expected = 0.0;
  for (const VideoAnnotation& v : d.videos)
    for (const FrameAnnotation& f : v.frames)
      for (const PersonAnnotation& p : f.persons)
        for (const PartAnnotation& part : p.parts) expected += table.at(v.action, group_of(part.category)).frequency;
  for (const GroupCounts& c : r.groups) {
    correct += c.correct;
    total += c.total;
  }
  EXPECT_NEAR(static_cast<double>(correct), expected, 1e-6);
  EXPECT_NEAR(static_cast<double>(correct) / static_cast<double>(total), expected / static_cast<double>(total), 1e-12);
}

TEST(PredictMode, ConfidenceIsTableFrequency) {
  const std::vector<VideoAnnotation> train = {head_video({0, 1, 0, 0})};
  const Dataset test{small_vocab(), train};
  const PredictionSet p = predict_mode(fit_mode_table(train, small_vocab()), test);
  EXPECT_DOUBLE_EQ(p.videos[0].frames[1].persons[0].parts[0].confidence, 0.75);
  EXPECT_EQ(p.videos[0].frames[1].persons[0].parts[0].state, 0);
}

TEST(PredictConstant, BroadcastsOneState) {
  const Dataset test{small_vocab(), {head_video({0, 1, 2, 3})}};
  const PredictionSet p = predict_constant(test, 2);
  for (const FramePrediction& f : p.videos[0].frames) EXPECT_EQ(f.persons[0].parts[0].state, 2);
  EXPECT_THROW(predict_constant(test, 9), std::invalid_argument);
}

AssemblyInput one_frame_input(std::vector<PersonDetection> persons) {
  AssemblyInput in;
  in.video_id = "v0";
  in.action = 1;
  in.action_confidence = 0.8;
  in.frames = {{0, std::move(persons)}};
  for (PartGroup g : kAllPartGroups) {
    in.segment_labels.push_back({{"v0", 0, 3, 3.0}, g, 1, g == PartGroup::kHead ? 0 : 2, 1.0, ""});
  }
  return in;
}

TEST(Assemble, WholeVideoSegmentBroadcastsState) {
  AssemblyInput in = one_frame_input({});
  for (int f = 0; f < 3; ++f) {
    PersonDetection p{{0, 0, 10, 10}, 0.9, {{PartCategory::kHead, {0, 0, 5, 5}, 0.7}}, std::nullopt};
    if (f == 0) in.frames[0].persons = {p};
    else in.frames.push_back({f, {p}});
  }
  const VideoPrediction out = assemble_video(in);
  ASSERT_EQ(out.frames.size(), 3u);
  for (const FramePrediction& f : out.frames) {
    EXPECT_EQ(f.persons[0].parts[0].state, kNoneState);
    EXPECT_DOUBLE_EQ(f.persons[0].parts[0].confidence, 0.7);
  }
  EXPECT_EQ(out.action, 1);
  EXPECT_DOUBLE_EQ(out.confidence, 0.8);
}

TEST(Assemble, KeepsTenMostConfidentPersons) {
  std::vector<PersonDetection> persons;
  for (int i = 0; i < 12; ++i) persons.push_back({{double(i), 0, double(i) + 5, 5}, (i * 7 % 12) / 12.0, {}, std::nullopt});
  const VideoPrediction out = assemble_video(one_frame_input(persons));
  ASSERT_EQ(out.frames[0].persons.size(), 10u);
  for (const PersonPrediction& p : out.frames[0].persons) EXPECT_GE(p.confidence, 2.0 / 12.0);
}

TEST(Assemble, KeepsTopPartPerCategory) {
  PersonDetection p{{0, 0, 10, 10}, 0.9,
                    {{PartCategory::kLeftHand, {0, 0, 2, 2}, 0.3}, {PartCategory::kLeftHand, {1, 1, 3, 3}, 0.6},
                     {PartCategory::kRightHand, {5, 5, 7, 7}, 0.1}},
                    std::nullopt};
  const VideoPrediction out = assemble_video(one_frame_input({p}));
  const auto& parts = out.frames[0].persons[0].parts;
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].box, (BBox{1, 1, 3, 3}));
  EXPECT_EQ(parts[0].state, 2);
}

TEST(Assemble, RejectsBadCoverage) {
  AssemblyInput uncovered = one_frame_input({});
  uncovered.frames.push_back({5, {}});
  EXPECT_THROW(assemble_video(uncovered), std::invalid_argument);

  AssemblyInput overlap = one_frame_input({});
  overlap.segment_labels.push_back({{"v0", 2, 4, 2.0}, PartGroup::kHead, 1, 0, 1.0, ""});
  EXPECT_THROW(assemble_video(overlap), std::invalid_argument);

  AssemblyInput duplicate = one_frame_input({});
  duplicate.segment_labels.push_back(duplicate.segment_labels.front());
  EXPECT_THROW(assemble_video(duplicate), std::invalid_argument);

  AssemblyInput missing = one_frame_input({{{0, 0, 10, 10}, 0.9, {{PartCategory::kHip, {0, 0, 5, 5}, 0.5}}, std::nullopt}});
  std::erase_if(missing.segment_labels, [](const SegmentPseudoLabel& l) { return l.group == PartGroup::kHip; });
  EXPECT_THROW(assemble_video(missing), std::invalid_argument);
}

TEST(Assemble, OracleInputsRoundTrip) {
  SynthConfig cfg = config(0.977);
  cfg.n_videos = 4;
  cfg.frames_per_video = 9;
  const Dataset d = generate_dataset(cfg).dataset;
  const auto inputs = oracle_assembly_inputs(d, 3.0);
  const PredictionSet p = assemble_predictions(inputs);
  EXPECT_NO_THROW(validate(p, d.vocab));
  EXPECT_EQ(parse_predictions_string(serialize_predictions(p, d.vocab), d.vocab), p);
  EXPECT_EQ(assemble_predictions(inputs), p);
  const EvaluationReport r = evaluate(d, p, {});
  EXPECT_EQ(r.video_accuracy, 1.0);
  EXPECT_GT(r.mean_psc, 0.8);
}

}  // namespace
}  // namespace pap
