#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pap {

using ActionId = int;
using StateId = int;

/// State index 0 is always "none".
inline constexpr StateId kNoneState = 0;
inline constexpr std::string_view kNoneStateName = "none";

/// Top-k limits of the prediction format.
inline constexpr std::size_t kMaxPersonsPerFrame = 10;

/// Corner-form box in pixel coordinates, origin top-left.
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  bool valid() const;

  friend bool operator==(const BBox&, const BBox&) = default;
};

enum class PartCategory : std::uint8_t {
  kHead,
  kLeftArm,
  kRightArm,
  kLeftHand,
  kRightHand,
  kHip,
  kLeftLeg,
  kRightLeg,
  kLeftFoot,
  kRightFoot,
};
inline constexpr std::size_t kNumPartCategories = 10;

enum class PartGroup : std::uint8_t { kHead, kArm, kHand, kHip, kLeg, kFoot };
inline constexpr std::size_t kNumPartGroups = 6;

inline constexpr std::array<PartCategory, kNumPartCategories> kAllPartCategories = {
    PartCategory::kHead,     PartCategory::kLeftArm,  PartCategory::kRightArm,
    PartCategory::kLeftHand, PartCategory::kRightHand, PartCategory::kHip,
    PartCategory::kLeftLeg,  PartCategory::kRightLeg, PartCategory::kLeftFoot,
    PartCategory::kRightFoot};

inline constexpr std::array<PartGroup, kNumPartGroups> kAllPartGroups = {
    PartGroup::kHead, PartGroup::kArm, PartGroup::kHand,
    PartGroup::kHip,  PartGroup::kLeg, PartGroup::kFoot};

/// Left and right variants collapse into one group.
constexpr PartGroup group_of(PartCategory c) {
  switch (c) {
    case PartCategory::kHead: return PartGroup::kHead;
    case PartCategory::kLeftArm:
    case PartCategory::kRightArm: return PartGroup::kArm;
    case PartCategory::kLeftHand:
    case PartCategory::kRightHand: return PartGroup::kHand;
    case PartCategory::kHip: return PartGroup::kHip;
    case PartCategory::kLeftLeg:
    case PartCategory::kRightLeg: return PartGroup::kLeg;
    case PartCategory::kLeftFoot:
    case PartCategory::kRightFoot: return PartGroup::kFoot;
  }
  return PartGroup::kHead;
}

constexpr std::size_t index_of(PartCategory c) { return static_cast<std::size_t>(c); }
constexpr std::size_t index_of(PartGroup g) { return static_cast<std::size_t>(g); }

std::string_view to_string(PartCategory c);
std::string_view to_string(PartGroup g);
std::optional<PartCategory> parse_part_category(std::string_view name);
std::optional<PartGroup> parse_part_group(std::string_view name);

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

/// Fixed-length keypoint array. Coordinates are in whatever frame the
/// owner declares (full frame for annotations, crop frame for rendering).
struct Pose {
  std::vector<Keypoint> keypoints;

  std::size_t size() const { return keypoints.size(); }
  friend bool operator==(const Pose&, const Pose&) = default;
};

struct PartAnnotation {
  PartCategory category = PartCategory::kHead;
  BBox box;
  StateId state = kNoneState;

  friend bool operator==(const PartAnnotation&, const PartAnnotation&) = default;
};

struct PersonAnnotation {
  BBox box;
  std::vector<PartAnnotation> parts;
  std::optional<Pose> pose;

  friend bool operator==(const PersonAnnotation&, const PersonAnnotation&) = default;
};

struct FrameAnnotation {
  int frame_idx = 0;
  std::vector<PersonAnnotation> persons;

  friend bool operator==(const FrameAnnotation&, const FrameAnnotation&) = default;
};

struct VideoAnnotation {
  std::string video_id;
  ActionId action = 0;
  double fps = 1.0;
  double duration_s = 1.0;
  std::vector<FrameAnnotation> frames;

  /// Size of the frame grid, ceil(fps * duration_s).
  int frame_count() const;

  friend bool operator==(const VideoAnnotation&, const VideoAnnotation&) = default;
};

struct Vocabulary {
  std::vector<std::string> video_actions;
  std::vector<std::string> part_states;  // part_states[0] == "none"

  std::optional<ActionId> find_action(std::string_view name) const;
  std::optional<StateId> find_state(std::string_view name) const;
  bool has_action(ActionId id) const;
  bool has_state(StateId id) const;

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;
};

struct Dataset {
  Vocabulary vocab;
  std::vector<VideoAnnotation> videos;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct PartPrediction {
  PartCategory category = PartCategory::kHead;
  BBox box;
  StateId state = kNoneState;
  double confidence = 1.0;

  friend bool operator==(const PartPrediction&, const PartPrediction&) = default;
};

struct PersonPrediction {
  BBox box;
  double confidence = 1.0;
  std::vector<PartPrediction> parts;
  std::optional<Pose> pose;

  friend bool operator==(const PersonPrediction&, const PersonPrediction&) = default;
};

struct FramePrediction {
  int frame_idx = 0;
  std::vector<PersonPrediction> persons;

  friend bool operator==(const FramePrediction&, const FramePrediction&) = default;
};

struct VideoPrediction {
  std::string video_id;
  ActionId action = 0;
  double confidence = 1.0;
  std::vector<FramePrediction> frames;

  const FramePrediction* find_frame(int frame_idx) const;
  friend bool operator==(const VideoPrediction&, const VideoPrediction&) = default;
};

struct PredictionSet {
  std::vector<VideoPrediction> videos;

  const VideoPrediction* find_video(std::string_view video_id) const;
  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

/// Raised for malformed input and invariant violations. `where()` is a
/// JSON-pointer style location of the offending element ("" for the root).
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string where, const std::string& what);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Throws ValidationError on the first violated invariant.
void validate(const Vocabulary& vocab);
void validate(const Dataset& dataset);
void validate(const PredictionSet& predictions, const Vocabulary& vocab);

Dataset parse_dataset_string(std::string_view json_text);
Dataset parse_dataset(const std::filesystem::path& path);

PredictionSet parse_predictions_string(std::string_view json_text, const Vocabulary& vocab);
PredictionSet parse_predictions(const std::filesystem::path& path, const Vocabulary& vocab);

/// Serialized text is deterministic: fixed key order, two-space indent,
/// shortest round-trip formatting for doubles, trailing newline.
std::string serialize_dataset(const Dataset& dataset);
std::string serialize_predictions(const PredictionSet& predictions, const Vocabulary& vocab);

/// Ground truth re-expressed as a prediction set with unit confidences.
PredictionSet as_predictions(const Dataset& dataset);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace pap
