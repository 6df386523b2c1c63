#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "pap/evaluator.hpp"

namespace pap {

namespace {

struct RankedPrediction {
  double confidence;
  std::size_t image;
  std::size_t index;
};

std::size_t total_gt(std::span<const DetectionImage> images) {
  std::size_t n = 0;
  for (const DetectionImage& img : images) n += img.gt.size();
  return n;
}

}  // namespace

std::vector<PrPoint> precision_recall(std::span<const DetectionImage> images, double iou_threshold) {
  std::vector<RankedPrediction> ranked;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t k = 0; k < images[i].predictions.size(); ++k) {
      ranked.push_back({images[i].predictions[k].confidence, i, k});
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedPrediction& a, const RankedPrediction& b) { return a.confidence > b.confidence; });

  std::vector<std::vector<bool>> taken(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) taken[i].assign(images[i].gt.size(), false);

  const auto gt_count = static_cast<double>(total_gt(images));
  std::vector<PrPoint> curve;
  long tp = 0;
  long seen = 0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const RankedPrediction& p = ranked[r];
    const DetectionImage& img = images[p.image];
    const BBox& box = img.predictions[p.index].box;
    int best = -1;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < img.gt.size(); ++g) {
      if (taken[p.image][g]) continue;
      const double v = iou(box, img.gt[g]);
      if (v > best_iou) {
        best_iou = v;
        best = static_cast<int>(g);
      }
    }
    if (best >= 0 && best_iou >= iou_threshold) {
      taken[p.image][static_cast<std::size_t>(best)] = true;
      ++tp;
    }
    ++seen;
    const bool group_ends = r + 1 == ranked.size() || ranked[r + 1].confidence != p.confidence;
    if (group_ends) {
      curve.push_back({gt_count > 0 ? static_cast<double>(tp) / gt_count : 0.0,
                       static_cast<double>(tp) / static_cast<double>(seen)});
    }
  }
  return curve;
}

std::optional<double> average_precision(std::span<const DetectionImage> images, double iou_threshold) {
  if (total_gt(images) == 0) return std::nullopt;
  const std::vector<PrPoint> curve = precision_recall(images, iou_threshold);
  // Precision envelope, swept from the high-recall end.
  std::vector<double> envelope(curve.size());
  double running = 0.0;
  for (std::size_t i = curve.size(); i-- > 0;) {
    running = std::max(running, curve[i].precision);
    envelope[i] = running;
  }
  double ap = 0.0;
  double previous_recall = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    ap += (curve[i].recall - previous_recall) * envelope[i];
    previous_recall = curve[i].recall;
  }
  return ap;
}

std::optional<double> average_precision_coco(std::span<const DetectionImage> images) {
  if (total_gt(images) == 0) return std::nullopt;
  double sum = 0.0;
  for (double t : kCocoIouThresholds) sum += *average_precision(images, t);
  return sum / static_cast<double>(kCocoIouThresholds.size());
}

std::vector<CategoryAp> detection_report(const Dataset& gt, const PredictionSet& pred) {
  constexpr std::size_t kPersonSlot = 0;
  constexpr std::size_t kSlots = 1 + kNumPartCategories;

  // One image per (video, frame), ground truth first, unmatched prediction frames after.
  using Key = std::tuple<std::string, int>;
  std::map<Key, std::array<DetectionImage, kSlots>> images;
  for (const VideoAnnotation& video : gt.videos) {
    for (const FrameAnnotation& frame : video.frames) {
      auto& slots = images[{video.video_id, frame.frame_idx}];
      for (const PersonAnnotation& person : frame.persons) {
        slots[kPersonSlot].gt.push_back(person.box);
        for (const PartAnnotation& part : person.parts) {
          slots[1 + index_of(part.category)].gt.push_back(part.box);
        }
      }
    }
  }
  for (const VideoPrediction& video : pred.videos) {
    for (const FramePrediction& frame : video.frames) {
      auto& slots = images[{video.video_id, frame.frame_idx}];
      for (const PersonPrediction& person : frame.persons) {
        slots[kPersonSlot].predictions.push_back({person.box, person.confidence});
        for (const PartPrediction& part : person.parts) {
          slots[1 + index_of(part.category)].predictions.push_back({part.box, part.confidence});
        }
      }
    }
  }

  std::vector<CategoryAp> report;
  report.reserve(kSlots);
  for (std::size_t s = 0; s < kSlots; ++s) {
    std::vector<DetectionImage> per_category;
    per_category.reserve(images.size());
    CategoryAp entry;
    entry.category = s == kPersonSlot ? "person" : std::string(to_string(kAllPartCategories[s - 1]));
    for (auto& [key, slots] : images) {
      entry.gt_count += slots[s].gt.size();
      entry.prediction_count += slots[s].predictions.size();
      per_category.push_back(slots[s]);
    }
    entry.ap = average_precision_coco(per_category);
    entry.ap50 = average_precision(per_category, 0.5);
    report.push_back(std::move(entry));
  }
  return report;
}

}  // namespace pap
