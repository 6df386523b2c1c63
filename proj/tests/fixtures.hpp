#pragma once

#include <string>

#include "pap/anno_model.hpp"

namespace pap::testing {

inline Vocabulary small_vocab() {
  return {{"hurling_sport", "clean_and_jerk"}, {"none", "nod", "hold", "carry"}};
}

inline std::string minimal_dataset_json() {
  return R"({
  "vocab": {"video_actions": ["hurling_sport", "clean_and_jerk"],
            "part_states": ["none", "nod", "hold", "carry"]},
  "videos": [{
    "video_id": "v0", "action": "hurling_sport", "fps": 1, "duration_s": 9,
    "frames": [{"frame_idx": 0, "persons": [{
      "box": [10, 10, 50, 90], "pose": null,
      "parts": [{"category": "head", "box": [20, 10, 40, 25], "state": "none"}]}]}]
  }]
})";
}

/// One person per listed state, one head part each, one frame per state.
inline VideoAnnotation head_video(const std::vector<StateId>& states, ActionId action = 0) {
  VideoAnnotation video{"v0", action, 1.0, static_cast<double>(states.size()), {}};
  for (std::size_t i = 0; i < states.size(); ++i) {
    PersonAnnotation person{{10, 10, 50, 90}, {{PartCategory::kHead, {20, 10, 40, 25}, states[i]}}, std::nullopt};
    video.frames.push_back({static_cast<int>(i), {person}});
  }
  return video;
}

}  // namespace pap::testing
