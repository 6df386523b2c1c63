#include "pap/baselines.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace pap {

ModeTable::ModeTable(std::size_t action_count) : entries_(action_count * kNumPartGroups) {}

const ModeEntry& ModeTable::at(ActionId action, PartGroup group) const {
  return entries_.at(static_cast<std::size_t>(action) * kNumPartGroups + index_of(group));
}

ModeEntry& ModeTable::at(ActionId action, PartGroup group) {
  return entries_.at(static_cast<std::size_t>(action) * kNumPartGroups + index_of(group));
}

ModeTable fit_mode_table(std::span<const VideoAnnotation> train, const Vocabulary& vocab) {
  if (train.empty()) throw std::invalid_argument("training set is empty");
  const std::size_t n_actions = vocab.video_actions.size();
  const std::size_t n_states = vocab.part_states.size();
  std::vector<long> counts(n_actions * kNumPartGroups * n_states, 0);
  auto slot = [&](ActionId a, PartGroup g) {
    return (static_cast<std::size_t>(a) * kNumPartGroups + index_of(g)) * n_states;
  };

  for (const VideoAnnotation& video : train) {
    for (const FrameAnnotation& frame : video.frames) {
      for (const PersonAnnotation& person : frame.persons) {
        for (const PartAnnotation& part : person.parts) {
          counts.at(slot(video.action, group_of(part.category)) + static_cast<std::size_t>(part.state)) += 1;
        }
      }
    }
  }

  ModeTable table(n_actions);
  for (std::size_t a = 0; a < n_actions; ++a) {
    for (PartGroup g : kAllPartGroups) {
      const auto begin = counts.begin() + static_cast<std::ptrdiff_t>(slot(static_cast<ActionId>(a), g));
      const std::vector<long> histogram(begin, begin + static_cast<std::ptrdiff_t>(n_states));
      const long total = std::accumulate(histogram.begin(), histogram.end(), 0L);
      ModeEntry& entry = table.at(static_cast<ActionId>(a), g);
      entry.instances = total;
      if (total == 0) continue;
      entry.state = histogram_mode(histogram);
      entry.frequency = static_cast<double>(histogram[static_cast<std::size_t>(entry.state)]) /
                        static_cast<double>(total);
    }
  }
  return table;
}

PredictionSet predict_mode(const ModeTable& table, const Dataset& test) {
  PredictionSet out = as_predictions(test);
  for (VideoPrediction& video : out.videos) {
    for (FramePrediction& frame : video.frames) {
      for (PersonPrediction& person : frame.persons) {
        for (PartPrediction& part : person.parts) {
          const ModeEntry& entry = table.at(video.action, group_of(part.category));
          part.state = entry.state;
          part.confidence = entry.frequency;
        }
      }
    }
  }
  return out;
}

PredictionSet predict_constant(const Dataset& test, StateId state) {
  if (!test.vocab.has_state(state)) throw std::invalid_argument("constant state outside vocabulary");
  PredictionSet out = as_predictions(test);
  for (VideoPrediction& video : out.videos) {
    for (FramePrediction& frame : video.frames) {
      for (PersonPrediction& person : frame.persons) {
        for (PartPrediction& part : person.parts) part.state = state;
      }
    }
  }
  return out;
}

VideoPrediction assemble_video(const AssemblyInput& input) {
  // Segment -> per-group label, keyed by start frame.
  std::map<int, std::pair<int, std::array<const SegmentPseudoLabel*, kNumPartGroups>>> segments;
  for (const SegmentPseudoLabel& label : input.segment_labels) {
    const Segment& seg = label.segment;
    if (seg.video_id != input.video_id) {
      throw std::invalid_argument(fmt::format("segment label of video '{}' supplied for '{}'",
                                              seg.video_id, input.video_id));
    }
    if (seg.start_frame >= seg.end_frame) {
      throw std::invalid_argument(fmt::format("empty segment [{}, {})", seg.start_frame, seg.end_frame));
    }
    auto [it, inserted] = segments.try_emplace(seg.start_frame);
    auto& [end, groups] = it->second;
    if (inserted) {
      end = seg.end_frame;
    } else if (end != seg.end_frame) {
      throw std::invalid_argument(fmt::format("frames from {} are covered by two segments", seg.start_frame));
    }
    const SegmentPseudoLabel*& slot = groups[index_of(label.group)];
    if (slot != nullptr) {
      throw std::invalid_argument(fmt::format("segment [{}, {}) has two '{}' labels", seg.start_frame,
                                              seg.end_frame, to_string(label.group)));
    }
    slot = &label;
  }
  int previous_end = std::numeric_limits<int>::min();
  for (const auto& [start, entry] : segments) {
    if (start < previous_end) {
      throw std::invalid_argument(fmt::format("frames from {} are covered by two segments", start));
    }
    previous_end = entry.first;
  }

  VideoPrediction out;
  out.video_id = input.video_id;
  out.action = input.action;
  out.confidence = input.action_confidence;

  std::vector<const FrameDetections*> frames;
  frames.reserve(input.frames.size());
  for (const FrameDetections& f : input.frames) frames.push_back(&f);
  std::stable_sort(frames.begin(), frames.end(),
                   [](const FrameDetections* a, const FrameDetections* b) { return a->frame_idx < b->frame_idx; });

  for (const FrameDetections* frame : frames) {
    if (!out.frames.empty() && out.frames.back().frame_idx == frame->frame_idx) {
      throw std::invalid_argument(fmt::format("frame {} supplied twice", frame->frame_idx));
    }
    auto seg = segments.upper_bound(frame->frame_idx);
    if (seg == segments.begin() || std::prev(seg)->second.first <= frame->frame_idx) {
      throw std::invalid_argument(fmt::format("frame {} of video '{}' is not covered by any segment",
                                              frame->frame_idx, input.video_id));
    }
    const auto& labels = std::prev(seg)->second.second;

    std::vector<const PersonDetection*> persons;
    for (const PersonDetection& p : frame->persons) persons.push_back(&p);
    std::stable_sort(persons.begin(), persons.end(), [](const PersonDetection* a, const PersonDetection* b) {
      return a->confidence > b->confidence;
    });
    if (persons.size() > kMaxPersonsPerFrame) persons.resize(kMaxPersonsPerFrame);

    FramePrediction fp{frame->frame_idx, {}};
    for (const PersonDetection* person : persons) {
      PersonPrediction pp{person->box, person->confidence, {}, person->pose};
      std::array<const PartDetection*, kNumPartCategories> best{};
      for (const PartDetection& part : person->parts) {
        const PartDetection*& slot = best[index_of(part.category)];
        if (slot == nullptr || part.confidence > slot->confidence) slot = &part;
      }
      for (const PartDetection* part : best) {
        if (part == nullptr) continue;
        const SegmentPseudoLabel* label = labels[index_of(group_of(part->category))];
        if (label == nullptr) {
          throw std::invalid_argument(fmt::format("frame {} has no '{}' segment label", frame->frame_idx,
                                                  to_string(group_of(part->category))));
        }
        pp.parts.push_back({part->category, part->box, label->modal_state, part->confidence});
      }
      fp.persons.push_back(std::move(pp));
    }
    out.frames.push_back(std::move(fp));
  }
  return out;
}

PredictionSet assemble_predictions(std::span<const AssemblyInput> inputs) {
  PredictionSet out;
  out.videos.reserve(inputs.size());
  for (const AssemblyInput& input : inputs) out.videos.push_back(assemble_video(input));
  return out;
}

std::vector<AssemblyInput> oracle_assembly_inputs(const Dataset& gt, double segment_duration_s) {
  std::vector<AssemblyInput> inputs;
  inputs.reserve(gt.videos.size());
  for (const VideoAnnotation& video : gt.videos) {
    AssemblyInput in;
    in.video_id = video.video_id;
    in.action = video.action;
    for (const FrameAnnotation& frame : video.frames) {
      FrameDetections fd{frame.frame_idx, {}};
      for (const PersonAnnotation& person : frame.persons) {
        PersonDetection pd{person.box, 1.0, {}, person.pose};
        for (const PartAnnotation& part : person.parts) pd.parts.push_back({part.category, part.box, 1.0});
        fd.persons.push_back(std::move(pd));
      }
      in.frames.push_back(std::move(fd));
    }
    if (!video.frames.empty()) {
      for (const Segment& seg : split_segments(video, segment_duration_s)) {
        auto labels = tag_segment(video, seg, gt.vocab);
        in.segment_labels.insert(in.segment_labels.end(), labels.begin(), labels.end());
      }
    }
    inputs.push_back(std::move(in));
  }
  return inputs;
}

}  // namespace pap
