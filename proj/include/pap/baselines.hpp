#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pap/anno_model.hpp"
#include "pap/segmenter.hpp"

namespace pap {

struct ModeEntry {
  StateId state = kNoneState;
  double frequency = 0.0;  // share of training instances carrying `state`
  long instances = 0;

  friend bool operator==(const ModeEntry&, const ModeEntry&) = default;
};

/// Modal training-set state per (video action, part group).
class ModeTable {
 public:
  ModeTable() = default;
  explicit ModeTable(std::size_t action_count);

  const ModeEntry& at(ActionId action, PartGroup group) const;
  ModeEntry& at(ActionId action, PartGroup group);
  std::size_t action_count() const { return entries_.size() / kNumPartGroups; }

  friend bool operator==(const ModeTable&, const ModeTable&) = default;

 private:
  std::vector<ModeEntry> entries_;
};

/// Pairs absent from training map to "none" with frequency 0. Throws
/// std::invalid_argument for an empty training set.
ModeTable fit_mode_table(std::span<const VideoAnnotation> train, const Vocabulary& vocab);

/// Oracle boxes and video labels from `test`, every part state replaced by
/// the table's modal state; part confidence is the table frequency.
PredictionSet predict_mode(const ModeTable& table, const Dataset& test);

/// Oracle boxes and labels with one fixed state for every part.
PredictionSet predict_constant(const Dataset& test, StateId state);

struct PartDetection {
  PartCategory category = PartCategory::kHead;
  BBox box;
  double confidence = 0.0;
};

struct PersonDetection {
  BBox box;
  double confidence = 0.0;
  std::vector<PartDetection> parts;
  std::optional<Pose> pose;
};

struct FrameDetections {
  int frame_idx = 0;
  std::vector<PersonDetection> persons;
};

/// Everything the earlier stages produce for one video.
struct AssemblyInput {
  std::string video_id;
  ActionId action = 0;
  double action_confidence = 1.0;
  std::vector<FrameDetections> frames;
  std::vector<SegmentPseudoLabel> segment_labels;
};

/// Integrates one video's stage outputs: keeps the ten most confident
/// persons per frame and the most confident part per category, then gives
/// each part the modal state of its group in the enclosing segment. Throws
/// std::invalid_argument for uncovered frames or overlapping segments.
VideoPrediction assemble_video(const AssemblyInput& input);

PredictionSet assemble_predictions(std::span<const AssemblyInput> inputs);

/// Detections taken from the ground truth (oracle boxes, unit confidence)
/// with segment labels derived from the ground-truth states.
std::vector<AssemblyInput> oracle_assembly_inputs(const Dataset& gt, double segment_duration_s);

}  // namespace pap
