#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "pap/evaluator.hpp"
#include "pap/synth.hpp"

namespace pap {
namespace {

TEST(Iou, Examples) {
  const BBox a{0, 0, 10, 10};
  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(iou(a, {20, 20, 30, 30}), 0.0);
  EXPECT_DOUBLE_EQ(iou(a, {5, 0, 15, 10}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(iou(a, {10, 0, 20, 10}), 0.0);
}

TEST(Iou, MatchesOracle) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const BBox a = oracle::random_box(rng, 50, 1, 30), b = oracle::random_box(rng, 50, 1, 30);
    EXPECT_DOUBLE_EQ(iou(a, b), oracle::box_iou(a, b));
    EXPECT_DOUBLE_EQ(iou(a, b), iou(b, a));
  }
}

FrameAnnotation two_person_frame() {
  return {0,
          {{{0, 0, 50, 100}, {{PartCategory::kHead, {10, 0, 40, 20}, 1}, {PartCategory::kHip, {5, 40, 45, 60}, 2}}, std::nullopt},
           {{60, 0, 110, 100}, {{PartCategory::kHead, {70, 0, 100, 20}, 3}}, std::nullopt}}};
}

FramePrediction as_prediction(const FrameAnnotation& f) {
  FramePrediction out{f.frame_idx, {}};
  for (const PersonAnnotation& p : f.persons) {
    PersonPrediction pp{p.box, 1.0, {}, p.pose};
    for (const PartAnnotation& part : p.parts) pp.parts.push_back({part.category, part.box, part.state, 1.0});
    out.persons.push_back(pp);
  }
  return out;
}

TEST(FramePsc, PerfectAndEmpty) {
  const FrameAnnotation gt = two_person_frame();
  const FramePrediction pred = as_prediction(gt);
  const FramePsc perfect = frame_psc(gt, &pred, {});
  EXPECT_EQ(perfect.correct_parts, 3);
  EXPECT_EQ(perfect.total_parts, 3);
  EXPECT_EQ(perfect.matched_persons, 2);
  EXPECT_EQ(perfect.groups[index_of(PartGroup::kHead)], (GroupCounts{2, 2}));

  const FramePrediction none{0, {}};
  EXPECT_EQ(frame_psc(gt, &none, {}).correct_parts, 0);
  const FramePsc missing = frame_psc(gt, nullptr, {});
  EXPECT_EQ(missing.correct_parts, 0);
  EXPECT_EQ(missing.total_parts, 3);
}

TEST(FramePsc, WrongStateOrBoxIsIncorrect) {
  const FrameAnnotation gt = two_person_frame();
  FramePrediction pred = as_prediction(gt);
  pred.persons[0].parts[0].state = 2;
  pred.persons[0].parts[1].box = {5, 80, 45, 100};
  EXPECT_EQ(frame_psc(gt, &pred, {}).correct_parts, 1);
}

TEST(MatchPersons, GreedyByConfidence) {
  const std::vector<PersonAnnotation> gt = {{{0, 0, 10, 10}, {}, std::nullopt}, {{0, 0, 10, 12}, {}, std::nullopt}};
  std::vector<PersonPrediction> pred = {{{0, 0, 10, 11}, 0.2, {}, std::nullopt},
                                        {{0, 0, 10, 10}, 0.9, {}, std::nullopt}};
  EXPECT_EQ(match_persons(gt, pred, {}), (std::vector<int>{1, 0}));
  pred.push_back({{100, 100, 110, 110}, 1.0, {}, std::nullopt});
  EXPECT_EQ(match_persons(gt, pred, {}), (std::vector<int>{1, 0}));
  EXPECT_EQ(match_persons(gt, pred, {0.99}), (std::vector<int>{1, -1}));
}

TEST(FramePsc, AgreesWithExhaustiveAssignment) {
  Rng rng(3);
  int agree = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [gt, pred] = oracle::random_small_frame(rng, 4);
    const FramePsc greedy = frame_psc(gt, &pred, {});
    const auto by_count = oracle::best_correct_by_match_count(gt, pred, 0.5);
    ASSERT_TRUE(by_count.contains(greedy.matched_persons)) << trial;
    const long best = by_count.at(greedy.matched_persons);
    EXPECT_LE(greedy.correct_parts, best) << trial;
    agree += greedy.correct_parts == best ? 1 : 0;
  }
  EXPECT_GE(agree, 950);
}

TEST(VideoPsc, PerfectAndFlipped) {
  SynthConfig cfg;
  cfg.n_videos = 1;
  const Dataset d = generate_dataset(cfg).dataset;
  const PredictionSet perfect = as_predictions(d);
  const VideoPsc a = video_psc(d.videos[0], &perfect.videos[0], {});
  EXPECT_EQ(a.psc, 1.0);
  EXPECT_TRUE(a.video_correct);

  PredictionSet flipped = perfect;
  for (auto& f : flipped.videos[0].frames)
    for (auto& p : f.persons)
      for (auto& part : p.parts) part.state = (part.state + 1) % static_cast<StateId>(d.vocab.part_states.size());
  EXPECT_EQ(video_psc(d.videos[0], &flipped.videos[0], {}).psc, 0.0);

  const VideoPsc missing = video_psc(d.videos[0], nullptr, {});
  EXPECT_EQ(missing.psc, 0.0);
  EXPECT_FALSE(missing.video_correct);
}

TEST(VideoPsc, CorruptedStatesNearSeventyPercent) {
  SynthConfig cfg;
  cfg.n_videos = 40;
  cfg.frames_per_video = 100;
  const Dataset d = generate_dataset(cfg).dataset;
  const EvaluationReport report = evaluate(d, corrupt_predictions(d, {0, 0, 0.3}, 4), {});
  long correct = 0, total = 0;
  for (const VideoPsc& v : report.videos) {
    correct += v.correct_parts;
    total += v.total_parts;
  }
  ASSERT_GE(total, 10000);
  EXPECT_NEAR(static_cast<double>(correct) / static_cast<double>(total), 0.70, 0.02);
  EXPECT_NEAR(report.mean_psc, 0.70, 0.02);
}

TEST(Roc, Examples) {
  const std::vector<VideoOutcome> perfect(5, {true, 1.0});
  EXPECT_EQ(roc_score(perfect), 1.0);
  const std::vector<VideoOutcome> wrong = {{false, 1.0}, {false, 0.3}};
  EXPECT_EQ(roc_score(wrong), 0.0);
  const std::vector<VideoOutcome> half(4, {true, 0.5});
  EXPECT_DOUBLE_EQ(roc_score(half), 0.5);
  const std::vector<VideoOutcome> mixed = {{true, 0.2}, {true, 0.8}, {false, 1.0}, {true, 0.0}};
  EXPECT_DOUBLE_EQ(roc_score(mixed), 0.25);
  EXPECT_THROW(roc_score(std::vector<VideoOutcome>{}), std::invalid_argument);
}

TEST(Roc, CurveSteps) {
  const std::vector<VideoOutcome> o = {{true, 0.2}, {true, 0.8}};
  const RocCurve c = roc_curve(o);
  EXPECT_DOUBLE_EQ(c.accuracy_at(0.0), 1.0);
  EXPECT_DOUBLE_EQ(c.accuracy_at(0.2), 1.0);
  EXPECT_DOUBLE_EQ(c.accuracy_at(0.5), 0.5);
  EXPECT_DOUBLE_EQ(c.accuracy_at(0.8), 0.5);
  EXPECT_DOUBLE_EQ(c.accuracy_at(0.9), 0.0);
  EXPECT_DOUBLE_EQ(c.score, 0.5);
}

std::vector<VideoOutcome> random_outcomes(Rng& rng) {
  std::vector<VideoOutcome> out(static_cast<std::size_t>(rng.between(1, 30)));
  for (VideoOutcome& o : out) {
    o.video_correct = rng.bernoulli(0.7);
    o.psc = rng.bernoulli(0.2) ? static_cast<double>(rng.between(0, 4)) / 4.0 : rng.uniform();
  }
  return out;
}

TEST(Roc, MatchesIntervalOracleAndIsPermutationInvariant) {
  Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<VideoOutcome> o = random_outcomes(rng);
    const double score = roc_score(o);
    EXPECT_NEAR(score, oracle::roc_by_intervals(o), 1e-12);
    EXPECT_GE(score, 0.0);
    EXPECT_LE(score, 1.0);
    std::reverse(o.begin(), o.end());
    EXPECT_EQ(roc_score(o), score);
    // Raising a correct video's psc never lowers the score.
    for (VideoOutcome& v : o) v.psc = std::min(1.0, v.psc + 0.1);
    EXPECT_GE(roc_score(o), score - 1e-12);
  }
}

TEST(Evaluate, JobsDoNotChangeReport) {
  SynthConfig cfg;
  cfg.n_videos = 12;
  const Dataset d = generate_dataset(cfg).dataset;
  const PredictionSet p = corrupt_predictions(d, {0.3, 5.0, 0.3}, 8);
  const EvaluationReport a = evaluate(d, p, {}, 1), b = evaluate(d, p, {}, 8);
  EXPECT_EQ(a.videos, b.videos);
  EXPECT_EQ(a.roc_score, b.roc_score);
  EXPECT_EQ(a.mean_psc, b.mean_psc);
  EXPECT_EQ(a.groups, b.groups);
}

TEST(Evaluate, PerfectPredictionsScoreOne) {
  const Dataset d = generate_dataset(SynthConfig{}).dataset;
  const EvaluationReport r = evaluate(d, as_predictions(d), {});
  EXPECT_EQ(r.roc_score, 1.0);
  EXPECT_EQ(r.mean_psc, 1.0);
  EXPECT_EQ(r.video_accuracy, 1.0);
}

TEST(AveragePrecision, Trivial) {
  const std::vector<DetectionImage> perfect = {{{{0, 0, 10, 10}, {20, 20, 30, 30}}, {{{0, 0, 10, 10}, 1.0}, {{20, 20, 30, 30}, 1.0}}}};
  EXPECT_EQ(average_precision(perfect, 0.5), 1.0);
  EXPECT_EQ(average_precision_coco(perfect), 1.0);
  const std::vector<DetectionImage> empty = {{{{0, 0, 10, 10}}, {}}};
  EXPECT_EQ(average_precision(empty, 0.5), 0.0);
  const std::vector<DetectionImage> no_gt = {{{}, {{{0, 0, 10, 10}, 0.4}}}};
  EXPECT_FALSE(average_precision(no_gt, 0.5).has_value());
}

TEST(AveragePrecision, HandExample) {
  // Ranked hits: TP, FP, TP over 2 GT boxes -> 0.5 * 1 + 0.5 * 2/3.
  const std::vector<DetectionImage> images = {
      {{{0, 0, 10, 10}, {50, 50, 60, 60}},
       {{{0, 0, 10, 10}, 0.9}, {{20, 20, 30, 30}, 0.8}, {{50, 50, 60, 60}, 0.7}}}};
  EXPECT_DOUBLE_EQ(*average_precision(images, 0.5), 0.5 + 0.5 * 2.0 / 3.0);
  const auto pr = precision_recall(images, 0.5);
  ASSERT_EQ(pr.size(), 3u);
  EXPECT_DOUBLE_EQ(pr[1].precision, 0.5);
}

TEST(AveragePrecision, MatchesThresholdSweep) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<DetectionImage> images(static_cast<std::size_t>(rng.between(1, 3)));
    for (DetectionImage& img : images) {
      const int g = rng.between(0, 4);
      for (int i = 0; i < g; ++i) img.gt.push_back(oracle::random_box(rng, 60, 5, 30));
      const int p = rng.between(0, 4);
      for (int i = 0; i < p; ++i) {
        BBox b = !img.gt.empty() && rng.bernoulli(0.6) ? img.gt[rng.below(img.gt.size())] : oracle::random_box(rng, 60, 5, 30);
        b.x_max += rng.uniform(0, 4);
        img.predictions.push_back({b, static_cast<double>(rng.between(1, 5)) / 5.0});
      }
    }
    for (double thr : {0.5, 0.75}) {
      const auto a = average_precision(images, thr), b = oracle::threshold_sweep_ap(images, thr);
      ASSERT_EQ(a.has_value(), b.has_value());
      if (a) {
        EXPECT_NEAR(*a, *b, 1e-12) << trial;
      }
    }
  }
}

TEST(DetectionReport, PerfectIsOne) {
  const Dataset d = generate_dataset(SynthConfig{}).dataset;
  const auto rows = detection_report(d, as_predictions(d));
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0].category, "person");
  for (const CategoryAp& row : rows) {
    ASSERT_TRUE(row.ap.has_value()) << row.category;
    EXPECT_EQ(*row.ap, 1.0);
    EXPECT_EQ(*row.ap50, 1.0);
  }
}

TEST(Cost, Examples) {
  const CostConfig cfg;
  EXPECT_DOUBLE_EQ(cost_model(30, InferenceMode::kFrame, 3, cfg), 21.0);
  EXPECT_DOUBLE_EQ(cost_model(30, InferenceMode::kSegment, 3, cfg), 7.0);
  EXPECT_EQ(inference_units(30, InferenceMode::kSegment, 30, cfg), 1);
  EXPECT_EQ(inference_units(30, InferenceMode::kSegment, 45, cfg), 1);
  EXPECT_DOUBLE_EQ(cost_model(30, InferenceMode::kSegment, 45, cfg), 0.7);
  EXPECT_EQ(inference_units(10, InferenceMode::kSegment, 3, cfg), 4);
  EXPECT_EQ(inference_units(0.3, InferenceMode::kFrame, 3, cfg), 1);
  EXPECT_THROW(cost_model(0, InferenceMode::kFrame, 3, cfg), std::invalid_argument);
  CostConfig bad;
  bad.clips_per_unit = 0;
  EXPECT_THROW(validate(bad), std::invalid_argument);
}

}  // namespace
}  // namespace pap
