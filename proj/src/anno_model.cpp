#include "pap/anno_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

namespace pap {

namespace {

constexpr std::array<std::string_view, kNumPartCategories> kCategoryNames = {
    "head",      "left_arm", "right_arm", "left_hand", "right_hand",
    "hip",       "left_leg", "right_leg", "left_foot", "right_foot"};

constexpr std::array<std::string_view, kNumPartGroups> kGroupNames = {
    "head", "arm", "hand", "hip", "leg", "foot"};

std::string join_path(const std::string& base, std::string_view key) {
  return fmt::format("{}/{}", base, key);
}

std::string join_path(const std::string& base, std::size_t index) {
  return fmt::format("{}/{}", base, index);
}

bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

void check_box(const BBox& box, const std::string& where) {
  if (!finite_non_negative(box.x_min) || !finite_non_negative(box.y_min) ||
      !finite_non_negative(box.x_max) || !finite_non_negative(box.y_max)) {
    throw ValidationError(where, "box coordinates must be finite and >= 0");
  }
  if (!(box.x_min < box.x_max) || !(box.y_min < box.y_max)) {
    throw ValidationError(where, "box must satisfy x_min < x_max and y_min < y_max");
  }
}

void check_pose(const Pose& pose, const std::string& where) {
  for (std::size_t i = 0; i < pose.keypoints.size(); ++i) {
    const Keypoint& kp = pose.keypoints[i];
    if (!std::isfinite(kp.x) || !std::isfinite(kp.y)) {
      throw ValidationError(join_path(where, i), "keypoint coordinates must be finite");
    }
    if (!(kp.confidence >= 0.0 && kp.confidence <= 1.0)) {
      throw ValidationError(join_path(where, i), "keypoint confidence must lie in [0, 1]");
    }
  }
}

void check_confidence(double c, const std::string& where) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw ValidationError(where, "confidence must lie in [0, 1]");
  }
}

template <typename Frame>
void check_frame_order(const std::vector<Frame>& frames, const std::string& where) {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string fw = join_path(join_path(where, "frames"), i);
    if (frames[i].frame_idx < 0) {
      throw ValidationError(join_path(fw, "frame_idx"), "frame_idx must be non-negative");
    }
    if (i > 0 && frames[i].frame_idx <= frames[i - 1].frame_idx) {
      throw ValidationError(join_path(fw, "frame_idx"),
                            fmt::format("frame_idx {} is duplicated or out of order",
                                        frames[i].frame_idx));
    }
  }
}

template <typename Part>
void check_unique_categories(const std::vector<Part>& parts, const std::string& where) {
  std::array<bool, kNumPartCategories> seen{};
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const std::size_t c = index_of(parts[k].category);
    if (seen[c]) {
      throw ValidationError(where, fmt::format("duplicate part category '{}' (parts/{})",
                                               to_string(parts[k].category), k));
    }
    seen[c] = true;
  }
}

}  // namespace

bool BBox::valid() const {
  return finite_non_negative(x_min) && finite_non_negative(y_min) &&
         finite_non_negative(x_max) && finite_non_negative(y_max) && x_min < x_max &&
         y_min < y_max;
}

std::string_view to_string(PartCategory c) { return kCategoryNames[index_of(c)]; }
std::string_view to_string(PartGroup g) { return kGroupNames[index_of(g)]; }

std::optional<PartCategory> parse_part_category(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return kAllPartCategories[i];
  }
  return std::nullopt;
}

std::optional<PartGroup> parse_part_group(std::string_view name) {
  for (std::size_t i = 0; i < kGroupNames.size(); ++i) {
    if (kGroupNames[i] == name) return kAllPartGroups[i];
  }
  return std::nullopt;
}

int VideoAnnotation::frame_count() const {
  // The epsilon absorbs products like 29.97 * 10.01 landing a hair above an integer.
  return static_cast<int>(std::ceil(fps * duration_s - 1e-9));
}

std::optional<ActionId> Vocabulary::find_action(std::string_view name) const {
  auto it = std::find(video_actions.begin(), video_actions.end(), name);
  if (it == video_actions.end()) return std::nullopt;
  return static_cast<ActionId>(it - video_actions.begin());
}

std::optional<StateId> Vocabulary::find_state(std::string_view name) const {
  auto it = std::find(part_states.begin(), part_states.end(), name);
  if (it == part_states.end()) return std::nullopt;
  return static_cast<StateId>(it - part_states.begin());
}

bool Vocabulary::has_action(ActionId id) const {
  return id >= 0 && static_cast<std::size_t>(id) < video_actions.size();
}

bool Vocabulary::has_state(StateId id) const {
  return id >= 0 && static_cast<std::size_t>(id) < part_states.size();
}

const FramePrediction* VideoPrediction::find_frame(int frame_idx) const {
  auto it = std::lower_bound(frames.begin(), frames.end(), frame_idx,
                             [](const FramePrediction& f, int idx) { return f.frame_idx < idx; });
  if (it == frames.end() || it->frame_idx != frame_idx) return nullptr;
  return &*it;
}

const VideoPrediction* PredictionSet::find_video(std::string_view video_id) const {
  for (const VideoPrediction& v : videos) {
    if (v.video_id == video_id) return &v;
  }
  return nullptr;
}

ValidationError::ValidationError(std::string where, const std::string& what)
    : std::runtime_error(fmt::format("{}: {}", where.empty() ? "/" : where, what)),
      where_(std::move(where)) {}

void validate(const Vocabulary& vocab) {
  if (vocab.video_actions.empty()) {
    throw ValidationError("/vocab/video_actions", "must list at least one action");
  }
  if (vocab.part_states.empty() || vocab.part_states.front() != kNoneStateName) {
    throw ValidationError("/vocab/part_states/0", "first part state must be \"none\"");
  }
  auto check_unique = [](const std::vector<std::string>& names, const std::string& where) {
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].empty()) throw ValidationError(join_path(where, i), "empty name");
      if (!seen.insert(names[i]).second) {
        throw ValidationError(join_path(where, i), fmt::format("duplicate name '{}'", names[i]));
      }
    }
  };
  check_unique(vocab.video_actions, "/vocab/video_actions");
  check_unique(vocab.part_states, "/vocab/part_states");
}

void validate(const Dataset& dataset) {
  validate(dataset.vocab);
  std::set<std::string_view> ids;
  for (std::size_t v = 0; v < dataset.videos.size(); ++v) {
    const VideoAnnotation& video = dataset.videos[v];
    const std::string vw = join_path("/videos", v);
    if (video.video_id.empty()) throw ValidationError(join_path(vw, "video_id"), "empty id");
    if (!ids.insert(video.video_id).second) {
      throw ValidationError(join_path(vw, "video_id"),
                            fmt::format("duplicate video_id '{}'", video.video_id));
    }
    if (!dataset.vocab.has_action(video.action)) {
      throw ValidationError(join_path(vw, "action"), "action outside vocabulary");
    }
    if (!(std::isfinite(video.fps) && video.fps > 0.0)) {
      throw ValidationError(join_path(vw, "fps"), "fps must be > 0");
    }
    if (!(std::isfinite(video.duration_s) && video.duration_s > 0.0)) {
      throw ValidationError(join_path(vw, "duration_s"), "duration_s must be > 0");
    }
    check_frame_order(video.frames, vw);
    const int frame_count = video.frame_count();
    for (std::size_t f = 0; f < video.frames.size(); ++f) {
      const FrameAnnotation& frame = video.frames[f];
      const std::string fw = join_path(join_path(vw, "frames"), f);
      if (frame.frame_idx >= frame_count) {
        throw ValidationError(join_path(fw, "frame_idx"),
                              fmt::format("frame_idx {} outside video of {} frames",
                                          frame.frame_idx, frame_count));
      }
      for (std::size_t p = 0; p < frame.persons.size(); ++p) {
        const PersonAnnotation& person = frame.persons[p];
        const std::string pw = join_path(join_path(fw, "persons"), p);
        check_box(person.box, join_path(pw, "box"));
        if (person.pose) check_pose(*person.pose, join_path(pw, "pose"));
        check_unique_categories(person.parts, pw);
        for (std::size_t k = 0; k < person.parts.size(); ++k) {
          const PartAnnotation& part = person.parts[k];
          const std::string kw = join_path(join_path(pw, "parts"), k);
          check_box(part.box, join_path(kw, "box"));
          if (!dataset.vocab.has_state(part.state)) {
            throw ValidationError(join_path(kw, "state"), "state outside vocabulary");
          }
        }
      }
    }
  }
}

void validate(const PredictionSet& predictions, const Vocabulary& vocab) {
  std::set<std::string_view> ids;
  for (std::size_t v = 0; v < predictions.videos.size(); ++v) {
    const VideoPrediction& video = predictions.videos[v];
    const std::string vw = join_path("/videos", v);
    if (video.video_id.empty()) throw ValidationError(join_path(vw, "video_id"), "empty id");
    if (!ids.insert(video.video_id).second) {
      throw ValidationError(join_path(vw, "video_id"),
                            fmt::format("duplicate video_id '{}'", video.video_id));
    }
    if (!vocab.has_action(video.action)) {
      throw ValidationError(join_path(vw, "action"), "action outside vocabulary");
    }
    check_confidence(video.confidence, join_path(vw, "confidence"));
    check_frame_order(video.frames, vw);
    for (std::size_t f = 0; f < video.frames.size(); ++f) {
      const FramePrediction& frame = video.frames[f];
      const std::string fw = join_path(join_path(vw, "frames"), f);
      if (frame.persons.size() > kMaxPersonsPerFrame) {
        throw ValidationError(join_path(fw, "persons"),
                              fmt::format("{} persons predicted, at most {} allowed",
                                          frame.persons.size(), kMaxPersonsPerFrame));
      }
      for (std::size_t p = 0; p < frame.persons.size(); ++p) {
        const PersonPrediction& person = frame.persons[p];
        const std::string pw = join_path(join_path(fw, "persons"), p);
        check_box(person.box, join_path(pw, "box"));
        check_confidence(person.confidence, join_path(pw, "confidence"));
        if (person.pose) check_pose(*person.pose, join_path(pw, "pose"));
        check_unique_categories(person.parts, pw);
        for (std::size_t k = 0; k < person.parts.size(); ++k) {
          const PartPrediction& part = person.parts[k];
          const std::string kw = join_path(join_path(pw, "parts"), k);
          check_box(part.box, join_path(kw, "box"));
          check_confidence(part.confidence, join_path(kw, "confidence"));
          if (!vocab.has_state(part.state)) {
            throw ValidationError(join_path(kw, "state"), "state outside vocabulary");
          }
        }
      }
    }
  }
}

PredictionSet as_predictions(const Dataset& dataset) {
  PredictionSet out;
  out.videos.reserve(dataset.videos.size());
  for (const VideoAnnotation& video : dataset.videos) {
    VideoPrediction vp{video.video_id, video.action, 1.0, {}};
    vp.frames.reserve(video.frames.size());
    for (const FrameAnnotation& frame : video.frames) {
      FramePrediction fp{frame.frame_idx, {}};
      for (const PersonAnnotation& person : frame.persons) {
        PersonPrediction pp{person.box, 1.0, {}, person.pose};
        for (const PartAnnotation& part : person.parts) {
          pp.parts.push_back({part.category, part.box, part.state, 1.0});
        }
        fp.persons.push_back(std::move(pp));
      }
      vp.frames.push_back(std::move(fp));
    }
    out.videos.push_back(std::move(vp));
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw std::runtime_error(fmt::format("failed reading '{}'", path.string()));
  return std::move(buffer).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace pap
