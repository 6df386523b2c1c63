#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pap/anno_model.hpp"

namespace pap {

/// Person matching is one-to-one: predictions are visited in descending
/// confidence (input order breaks ties) and each takes the unmatched ground
/// truth person of highest IoU, provided that IoU reaches the threshold.
/// Parts use the same threshold against the same-category prediction.
struct MatchPolicy {
  double iou_threshold = 0.5;
};

/// Intersection over union; 0 for disjoint boxes.
double iou(const BBox& a, const BBox& b);

struct GroupCounts {
  long correct = 0;
  long total = 0;

  friend bool operator==(const GroupCounts&, const GroupCounts&) = default;
};
using GroupBreakdown = std::array<GroupCounts, kNumPartGroups>;

struct FramePsc {
  int frame_idx = 0;
  long correct_parts = 0;
  long total_parts = 0;
  int matched_persons = 0;
  GroupBreakdown groups{};

  friend bool operator==(const FramePsc&, const FramePsc&) = default;
};

/// For each ground-truth person, the index of its matched prediction or -1.
std::vector<int> match_persons(std::span<const PersonAnnotation> gt,
                               std::span<const PersonPrediction> pred, const MatchPolicy& policy);

/// `pred` may be null (no prediction for the frame).
FramePsc frame_psc(const FrameAnnotation& gt, const FramePrediction* pred, const MatchPolicy& policy);

struct VideoPsc {
  std::string video_id;
  double psc = 0.0;
  bool video_correct = false;
  long correct_parts = 0;
  long total_parts = 0;
  GroupBreakdown groups{};
  std::vector<FramePsc> frames;

  friend bool operator==(const VideoPsc&, const VideoPsc&) = default;
};

/// psc = sum(correct) / sum(total) over the video's frames, 0 without
/// ground-truth parts. A missing prediction scores psc 0 and a wrong label.
VideoPsc video_psc(const VideoAnnotation& gt, const VideoPrediction* pred, const MatchPolicy& policy);

struct VideoOutcome {
  bool video_correct = false;
  double psc = 0.0;
};

/// accuracy(t) is constant on (threshold of the previous point, threshold].
struct RocPoint {
  double threshold = 0.0;
  double accuracy = 0.0;
};

/// Step function accuracy(t) = share of videos with a correct label and
/// psc >= t, integrated exactly over t in [0, 1].
struct RocCurve {
  std::vector<RocPoint> breakpoints;
  double score = 0.0;

  double accuracy_at(double t) const;
};

/// Throws std::invalid_argument on an empty list.
RocCurve roc_curve(std::span<const VideoOutcome> outcomes);
double roc_score(std::span<const VideoOutcome> outcomes);

struct EvaluationReport {
  std::vector<VideoPsc> videos;
  double video_accuracy = 0.0;
  double mean_psc = 0.0;
  double roc_score = 0.0;
  GroupBreakdown groups{};
};

/// Scores every ground-truth video; work is spread over `jobs` threads
/// and merged in video order, so the result does not depend on `jobs`.
EvaluationReport evaluate(const Dataset& gt, const PredictionSet& pred, const MatchPolicy& policy,
                          std::size_t jobs = 1);

// Detection AP ---------------------------------------------------------------

struct ScoredBox {
  BBox box;
  double confidence = 0.0;
};

/// Ground truth and predictions of one category in one image.
struct DetectionImage {
  std::vector<BBox> gt;
  std::vector<ScoredBox> predictions;
};

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

/// Precision/recall after each distinct confidence level, highest first.
/// Predictions sharing a confidence enter the curve together.
std::vector<PrPoint> precision_recall(std::span<const DetectionImage> images, double iou_threshold);

/// All-point interpolated AP; std::nullopt when there is no ground truth.
std::optional<double> average_precision(std::span<const DetectionImage> images, double iou_threshold);

/// 0.50, 0.55, ..., 0.95.
inline constexpr std::array<double, 10> kCocoIouThresholds = {0.50, 0.55, 0.60, 0.65, 0.70,
                                                              0.75, 0.80, 0.85, 0.90, 0.95};

/// Mean AP over kCocoIouThresholds.
std::optional<double> average_precision_coco(std::span<const DetectionImage> images);

struct CategoryAp {
  std::string category;
  std::size_t gt_count = 0;
  std::size_t prediction_count = 0;
  std::optional<double> ap;
  std::optional<double> ap50;
};

/// "person" followed by the ten part categories.
std::vector<CategoryAp> detection_report(const Dataset& gt, const PredictionSet& pred);

// Inference cost -------------------------------------------------------------

enum class InferenceMode { kFrame, kSegment };

struct CostConfig {
  int clips_per_unit = 7;
  int frames_per_clip = 32;
  int frame_stride = 2;
  double flops_per_clip = 0.1;  // TFLOP
  double fps = 30.0;
  double keyframe_interval_s = 1.0;
};

/// Throws std::invalid_argument unless every field is positive.
void validate(const CostConfig& cfg);

/// Keyframes ceil(duration / keyframe_interval) in frame mode, segments
/// ceil(duration / segment_duration) in segment mode.
long inference_units(double video_duration_s, InferenceMode mode, double segment_duration_s,
                     const CostConfig& cfg);

/// Recognizer TFLOPs: units * clips_per_unit * flops_per_clip.
double cost_model(double video_duration_s, InferenceMode mode, double segment_duration_s,
                  const CostConfig& cfg);

}  // namespace pap
