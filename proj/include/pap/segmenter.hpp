#pragma once

#include <array>
#include <string>
#include <vector>

#include "pap/anno_model.hpp"

namespace pap {

inline constexpr double kDefaultSegmentDuration = 3.0;

/// Half-open frame range [start_frame, end_frame) of one video.
struct Segment {
  std::string video_id;
  int start_frame = 0;
  int end_frame = 0;
  double duration_s = 0.0;

  bool contains(int frame_idx) const { return frame_idx >= start_frame && frame_idx < end_frame; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// (video action, part group, modal state) for one segment. `frequency`
/// is the modal fraction of the group inside the segment.
struct SegmentPseudoLabel {
  Segment segment;
  PartGroup group = PartGroup::kHead;
  ActionId video_action = 0;
  StateId modal_state = kNoneState;
  double frequency = 1.0;
  std::string composite;

  friend bool operator==(const SegmentPseudoLabel&, const SegmentPseudoLabel&) = default;
};

/// "(<video_action>) <group>: <state>"
std::string composite_label(const Vocabulary& vocab, ActionId action, PartGroup group, StateId state);

/// Tiles the video's frame grid with segments of round(duration_s * fps)
/// frames (at least 1); the last segment may be shorter. Throws
/// std::invalid_argument for duration_s <= 0 or a video with no frames.
std::vector<Segment> split_segments(const VideoAnnotation& video, double duration_s);

/// Per-group state histograms over every part instance in the segment.
using GroupHistograms = std::array<std::vector<long>, kNumPartGroups>;
GroupHistograms segment_histograms(const VideoAnnotation& video, const Segment& seg,
                                   std::size_t state_count);

/// Mode of a histogram; ties resolve to the lowest state id, empty to "none".
StateId histogram_mode(const std::vector<long>& histogram);

/// Six labels, one per group in PartGroup order.
std::vector<SegmentPseudoLabel> tag_segment(const VideoAnnotation& video, const Segment& seg,
                                            const Vocabulary& vocab);

/// Share of the group's instances that carry the modal state; 1.0 when the
/// group has no instances in the segment.
double modal_fraction(const VideoAnnotation& video, const Segment& seg, PartGroup group,
                      const Vocabulary& vocab);

/// split_segments + tag_segment over a whole dataset, in video order.
std::vector<SegmentPseudoLabel> make_segment_labels(const Dataset& dataset, double duration_s);

/// JSON list of {video_id, start_frame, end_frame, group, composite, state}.
std::string serialize_segment_labels(const std::vector<SegmentPseudoLabel>& labels,
                                     const Vocabulary& vocab);

}  // namespace pap
