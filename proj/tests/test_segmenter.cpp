#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pap/evaluator.hpp"
#include "pap/segmenter.hpp"
#include "pap/synth.hpp"

namespace pap {
namespace {

using testing::head_video;
using testing::small_vocab;

constexpr StateId kNone = 0, kNod = 1, kHold = 2;

std::vector<int> lengths(const std::vector<Segment>& segs) {
  std::vector<int> out;
  for (const Segment& s : segs) out.push_back(s.end_frame - s.start_frame);
  return out;
}

TEST(SplitSegments, ExactDivision) {
  const auto segs = split_segments(head_video(std::vector<StateId>(9, kNone)), 3.0);
  EXPECT_EQ(lengths(segs), (std::vector<int>{3, 3, 3}));
  EXPECT_EQ(segs[1].start_frame, 3);
  EXPECT_EQ(segs[1].video_id, "v0");
}

TEST(SplitSegments, Remainder) {
  EXPECT_EQ(lengths(split_segments(head_video(std::vector<StateId>(10, kNone)), 3.0)),
            (std::vector<int>{3, 3, 3, 1}));
}

TEST(SplitSegments, DurationBeyondVideo) {
  const auto segs = split_segments(head_video(std::vector<StateId>(9, kNone)), 10.0);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].start_frame, 0);
  EXPECT_EQ(segs[0].end_frame, 9);
}

TEST(SplitSegments, TilesTheFrameGrid) {
  for (double dur : {0.5, 1.0, 2.0, 2.6, 3.0, 7.0}) {
    const VideoAnnotation v = head_video(std::vector<StateId>(17, kNone));
    const auto segs = split_segments(v, dur);
    int expect_start = 0;
    for (const Segment& s : segs) {
      EXPECT_EQ(s.start_frame, expect_start);
      EXPECT_LT(s.start_frame, s.end_frame);
      expect_start = s.end_frame;
    }
    EXPECT_EQ(expect_start, v.frame_count());
  }
}

TEST(SplitSegments, RejectsBadInput) {
  EXPECT_THROW(split_segments(head_video({kNone}), 0.0), std::invalid_argument);
  EXPECT_THROW(split_segments(head_video({}), 3.0), std::invalid_argument);
}

TEST(TagSegment, ModalHeadLabel) {
  const VideoAnnotation v = head_video({kNone, kNone, kNone, kNod});
  const Segment seg{"v0", 0, 4, 4.0};
  const auto labels = tag_segment(v, seg, small_vocab());
  ASSERT_EQ(labels.size(), kNumPartGroups);
  EXPECT_EQ(labels[0].group, PartGroup::kHead);
  EXPECT_EQ(labels[0].modal_state, kNone);
  EXPECT_EQ(labels[0].composite, "(hurling_sport) head: none");
  EXPECT_DOUBLE_EQ(labels[0].frequency, 0.75);
}

TEST(TagSegment, EmptyGroupIsNone) {
  const auto labels = tag_segment(head_video({kNod, kNod}), {"v0", 0, 2, 2.0}, small_vocab());
  const SegmentPseudoLabel& leg = labels[index_of(PartGroup::kLeg)];
  EXPECT_EQ(leg.group, PartGroup::kLeg);
  EXPECT_EQ(leg.modal_state, kNone);
  EXPECT_EQ(leg.composite, "(hurling_sport) leg: none");
  EXPECT_EQ(labels[0].composite, "(hurling_sport) head: nod");
}

TEST(TagSegment, TieGoesToLowestState) {
  const auto labels = tag_segment(head_video({kHold, kNod, kHold, kNod}), {"v0", 0, 4, 4.0}, small_vocab());
  EXPECT_EQ(labels[0].modal_state, kNod);
}

TEST(TagSegment, RejectsForeignSegment) {
  EXPECT_THROW(tag_segment(head_video({kNone}), {"other", 0, 1, 1.0}, small_vocab()), std::out_of_range);
  EXPECT_THROW(tag_segment(head_video({kNone}), {"v0", 0, 5, 5.0}, small_vocab()), std::out_of_range);
}

TEST(ModalFraction, Examples) {
  const Vocabulary vocab = small_vocab();
  EXPECT_DOUBLE_EQ(modal_fraction(head_video({kNod, kNod, kNod}), {"v0", 0, 3, 3.0}, PartGroup::kHead, vocab), 1.0);
  EXPECT_DOUBLE_EQ(modal_fraction(head_video({kNone, kNone, kNone, kNod}), {"v0", 0, 4, 4.0}, PartGroup::kHead, vocab),
                   0.75);
  EXPECT_DOUBLE_EQ(modal_fraction(head_video({kNod}), {"v0", 0, 1, 1.0}, PartGroup::kFoot, vocab), 1.0);
}

TEST(HistogramMode, Rules) {
  EXPECT_EQ(histogram_mode({}), kNoneState);
  EXPECT_EQ(histogram_mode({0, 0, 0}), kNoneState);
  EXPECT_EQ(histogram_mode({1, 3, 3}), 1);
  EXPECT_EQ(histogram_mode({5, 3, 6}), 2);
}

SynthConfig varied_config(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.n_videos = 6;
  cfg.frames_per_video = 20;
  cfg.n_states = 4;  // small vocabulary so ties are common
  cfg.state_skew = 0.4;
  return cfg;
}

TEST(TagSegment, MatchesBruteForceCount) {
  const Dataset d = generate_dataset(varied_config(3)).dataset;
  for (const VideoAnnotation& v : d.videos) {
    for (double dur : {1.0, 2.0, 3.0, 5.0}) {
      for (const Segment& seg : split_segments(v, dur)) {
        const auto labels = tag_segment(v, seg, d.vocab);
        for (PartGroup g : kAllPartGroups) {
          std::size_t modal = 0, total = 0;
          const StateId expect = oracle::mode_by_counting(v, seg.start_frame, seg.end_frame, g, &modal, &total);
          EXPECT_EQ(labels[index_of(g)].modal_state, expect);
          const double frac = total == 0 ? 1.0 : static_cast<double>(modal) / static_cast<double>(total);
          EXPECT_DOUBLE_EQ(modal_fraction(v, seg, g, d.vocab), frac);
        }
      }
    }
  }
}

TEST(TagSegment, InvariantUnderPersonPermutation) {
  Dataset d = generate_dataset(varied_config(4)).dataset;
  const VideoAnnotation original = d.videos[0];
  VideoAnnotation shuffled = original;
  Rng rng(99);
  for (FrameAnnotation& f : shuffled.frames) {
    for (std::size_t i = f.persons.size(); i > 1; --i) std::swap(f.persons[i - 1], f.persons[rng.below(i)]);
    for (PersonAnnotation& p : f.persons) std::reverse(p.parts.begin(), p.parts.end());
  }
  for (const Segment& seg : split_segments(original, 3.0)) {
    EXPECT_EQ(tag_segment(original, seg, d.vocab), tag_segment(shuffled, seg, d.vocab));
  }
}

// Predicting every frame with its segment's modal state scores exactly the
// instance-weighted mean modal fraction.
TEST(TagSegment, SegmentPredictorAccuracyIdentity) {
  const Dataset d = generate_dataset(varied_config(5)).dataset;
  const auto labels = make_segment_labels(d, 3.0);
  PredictionSet pred = as_predictions(d);
  long weighted_numer = 0, instances = 0;
  std::size_t next = 0;
  for (std::size_t v = 0; v < d.videos.size(); ++v) {
    const VideoAnnotation& video = d.videos[v];
    for (const Segment& seg : split_segments(video, 3.0)) {
      for (PartGroup g : kAllPartGroups) {
        const SegmentPseudoLabel& label = labels.at(next++);
        ASSERT_EQ(label.segment, seg);
        ASSERT_EQ(label.group, g);
        std::size_t modal = 0, total = 0;
        oracle::mode_by_counting(video, seg.start_frame, seg.end_frame, g, &modal, &total);
        weighted_numer += static_cast<long>(modal);
        instances += static_cast<long>(total);
        for (FramePrediction& f : pred.videos[v].frames) {
          if (!seg.contains(f.frame_idx)) continue;
          for (PersonPrediction& p : f.persons)
            for (PartPrediction& part : p.parts)
              if (group_of(part.category) == g) part.state = label.modal_state;
        }
      }
    }
  }
  ASSERT_EQ(next, labels.size());
  const EvaluationReport report = evaluate(d, pred, MatchPolicy{});
  long correct = 0, total = 0;
  for (const GroupCounts& c : report.groups) {
    correct += c.correct;
    total += c.total;
  }
  EXPECT_EQ(total, instances);
  EXPECT_EQ(correct, weighted_numer);
}

TEST(SegmentLabels, SerializationIsStable) {
  const Dataset d = generate_dataset(varied_config(6)).dataset;
  const auto labels = make_segment_labels(d, 3.0);
  const std::string text = serialize_segment_labels(labels, d.vocab);
  EXPECT_EQ(text, serialize_segment_labels(make_segment_labels(d, 3.0), d.vocab));
  EXPECT_NE(text.find("\"composite\""), std::string::npos);
}

}  // namespace
}  // namespace pap
