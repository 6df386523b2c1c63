#include "pap/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace pap {

namespace {

void check_segment(const VideoAnnotation& video, const Segment& seg) {
  if (seg.video_id != video.video_id) {
    throw std::out_of_range(
        fmt::format("segment of video '{}' applied to '{}'", seg.video_id, video.video_id));
  }
  if (seg.start_frame < 0 || seg.start_frame >= seg.end_frame || seg.end_frame > video.frame_count()) {
    throw std::out_of_range(fmt::format("segment [{}, {}) outside video '{}' of {} frames",
                                        seg.start_frame, seg.end_frame, video.video_id,
                                        video.frame_count()));
  }
}

}  // namespace

std::string composite_label(const Vocabulary& vocab, ActionId action, PartGroup group, StateId state) {
  return fmt::format("({}) {}: {}", vocab.video_actions.at(static_cast<std::size_t>(action)),
                     to_string(group), vocab.part_states.at(static_cast<std::size_t>(state)));
}

std::vector<Segment> split_segments(const VideoAnnotation& video, double duration_s) {
  if (!(duration_s > 0.0)) throw std::invalid_argument("segment duration must be > 0");
  if (video.frames.empty()) {
    throw std::invalid_argument(fmt::format("video '{}' has no frames", video.video_id));
  }
  const int total = video.frame_count();
  const int length = std::max(1, static_cast<int>(std::lround(duration_s * video.fps)));
  std::vector<Segment> segments;
  segments.reserve(static_cast<std::size_t>((total + length - 1) / length));
  for (int start = 0; start < total; start += length) {
    const int end = std::min(total, start + length);
    segments.push_back({video.video_id, start, end, static_cast<double>(end - start) / video.fps});
  }
  return segments;
}

GroupHistograms segment_histograms(const VideoAnnotation& video, const Segment& seg,
                                   std::size_t state_count) {
  check_segment(video, seg);
  GroupHistograms hist;
  for (auto& h : hist) h.assign(state_count, 0);
  auto first = std::lower_bound(video.frames.begin(), video.frames.end(), seg.start_frame,
                                [](const FrameAnnotation& f, int idx) { return f.frame_idx < idx; });
  for (auto it = first; it != video.frames.end() && it->frame_idx < seg.end_frame; ++it) {
    for (const PersonAnnotation& person : it->persons) {
      for (const PartAnnotation& part : person.parts) {
        hist[index_of(group_of(part.category))].at(static_cast<std::size_t>(part.state)) += 1;
      }
    }
  }
  return hist;
}

StateId histogram_mode(const std::vector<long>& histogram) {
  StateId best = kNoneState;
  long best_count = 0;
  for (std::size_t s = 0; s < histogram.size(); ++s) {
    if (histogram[s] > best_count) {
      best_count = histogram[s];
      best = static_cast<StateId>(s);
    }
  }
  return best;
}

std::vector<SegmentPseudoLabel> tag_segment(const VideoAnnotation& video, const Segment& seg,
                                            const Vocabulary& vocab) {
  const GroupHistograms hist = segment_histograms(video, seg, vocab.part_states.size());
  std::vector<SegmentPseudoLabel> labels;
  labels.reserve(kNumPartGroups);
  for (PartGroup group : kAllPartGroups) {
    const auto& h = hist[index_of(group)];
    const StateId mode = histogram_mode(h);
    long total = 0;
    for (long c : h) total += c;
    const double frequency =
        total == 0 ? 1.0 : static_cast<double>(h[static_cast<std::size_t>(mode)]) / static_cast<double>(total);
    labels.push_back({seg, group, video.action, mode, frequency,
                      composite_label(vocab, video.action, group, mode)});
  }
  return labels;
}

double modal_fraction(const VideoAnnotation& video, const Segment& seg, PartGroup group,
                      const Vocabulary& vocab) {
  const GroupHistograms hist = segment_histograms(video, seg, vocab.part_states.size());
  const auto& h = hist[index_of(group)];
  long total = 0;
  for (long c : h) total += c;
  if (total == 0) return 1.0;
  return static_cast<double>(h[static_cast<std::size_t>(histogram_mode(h))]) / static_cast<double>(total);
}

std::vector<SegmentPseudoLabel> make_segment_labels(const Dataset& dataset, double duration_s) {
  std::vector<SegmentPseudoLabel> labels;
  for (const VideoAnnotation& video : dataset.videos) {
    if (video.frames.empty()) continue;
    for (const Segment& seg : split_segments(video, duration_s)) {
      auto tagged = tag_segment(video, seg, dataset.vocab);
      labels.insert(labels.end(), std::make_move_iterator(tagged.begin()),
                    std::make_move_iterator(tagged.end()));
    }
  }
  return labels;
}

std::string serialize_segment_labels(const std::vector<SegmentPseudoLabel>& labels,
                                     const Vocabulary& vocab) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const SegmentPseudoLabel& label : labels) {
    nlohmann::ordered_json j;
    j["video_id"] = label.segment.video_id;
    j["start_frame"] = label.segment.start_frame;
    j["end_frame"] = label.segment.end_frame;
    j["group"] = std::string(to_string(label.group));
    j["composite"] = label.composite;
    j["state"] = vocab.part_states.at(static_cast<std::size_t>(label.modal_state));
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace pap
