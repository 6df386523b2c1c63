#include "pap/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pap/parallel.hpp"

namespace pap {

double iou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::vector<int> match_persons(std::span<const PersonAnnotation> gt,
                               std::span<const PersonPrediction> pred, const MatchPolicy& policy) {
  std::vector<std::size_t> order(pred.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pred[a].confidence > pred[b].confidence;
  });

  std::vector<int> match(gt.size(), -1);
  for (std::size_t p : order) {
    int best = -1;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (match[g] >= 0) continue;
      const double v = iou(gt[g].box, pred[p].box);
      if (v > best_iou) {
        best_iou = v;
        best = static_cast<int>(g);
      }
    }
    if (best >= 0 && best_iou >= policy.iou_threshold) match[static_cast<std::size_t>(best)] = static_cast<int>(p);
  }
  return match;
}

FramePsc frame_psc(const FrameAnnotation& gt, const FramePrediction* pred, const MatchPolicy& policy) {
  FramePsc result;
  result.frame_idx = gt.frame_idx;
  std::vector<int> match(gt.persons.size(), -1);
  if (pred != nullptr) match = match_persons(gt.persons, pred->persons, policy);

  for (std::size_t g = 0; g < gt.persons.size(); ++g) {
    const PersonAnnotation& person = gt.persons[g];
    const PersonPrediction* guess =
        match[g] >= 0 ? &pred->persons[static_cast<std::size_t>(match[g])] : nullptr;
    if (guess != nullptr) ++result.matched_persons;
    for (const PartAnnotation& part : person.parts) {
      GroupCounts& counts = result.groups[index_of(group_of(part.category))];
      ++counts.total;
      ++result.total_parts;
      if (guess == nullptr) continue;
      auto it = std::find_if(guess->parts.begin(), guess->parts.end(),
                             [&](const PartPrediction& p) { return p.category == part.category; });
      if (it != guess->parts.end() && it->state == part.state &&
          iou(part.box, it->box) >= policy.iou_threshold) {
        ++counts.correct;
        ++result.correct_parts;
      }
    }
  }
  return result;
}

VideoPsc video_psc(const VideoAnnotation& gt, const VideoPrediction* pred, const MatchPolicy& policy) {
  VideoPsc result;
  result.video_id = gt.video_id;
  result.video_correct = pred != nullptr && pred->action == gt.action;
  result.frames.reserve(gt.frames.size());
  for (const FrameAnnotation& frame : gt.frames) {
    const FramePrediction* fp = pred != nullptr ? pred->find_frame(frame.frame_idx) : nullptr;
    FramePsc fr = frame_psc(frame, fp, policy);
    result.correct_parts += fr.correct_parts;
    result.total_parts += fr.total_parts;
    for (std::size_t g = 0; g < kNumPartGroups; ++g) {
      result.groups[g].correct += fr.groups[g].correct;
      result.groups[g].total += fr.groups[g].total;
    }
    result.frames.push_back(fr);
  }
  if (pred != nullptr && result.total_parts > 0) {
    result.psc = static_cast<double>(result.correct_parts) / static_cast<double>(result.total_parts);
  }
  return result;
}

double RocCurve::accuracy_at(double t) const {
  // First breakpoint whose threshold is >= t governs t.
  auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), t,
                             [](const RocPoint& p, double v) { return p.threshold < v; });
  return it == breakpoints.end() ? 0.0 : it->accuracy;
}

RocCurve roc_curve(std::span<const VideoOutcome> outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("roc_score needs at least one video");
  std::vector<double> psc;
  psc.reserve(outcomes.size());
  for (const VideoOutcome& o : outcomes) {
    if (o.video_correct) psc.push_back(std::clamp(o.psc, 0.0, 1.0));
  }
  std::sort(psc.begin(), psc.end());

  const double n = static_cast<double>(outcomes.size());
  RocCurve curve;
  double previous = 0.0;
  std::size_t i = 0;
  while (i < psc.size()) {
    // accuracy on (previous, psc[i]] counts every correct video with psc >= psc[i].
    const double t = psc[i];
    const auto remaining = static_cast<double>(psc.size() - i);
    if (t > previous) {
      curve.breakpoints.push_back({t, remaining / n});
      curve.score += (t - previous) * remaining;
      previous = t;
    }
    while (i < psc.size() && psc[i] == t) ++i;
  }
  curve.score /= n;
  return curve;
}

double roc_score(std::span<const VideoOutcome> outcomes) { return roc_curve(outcomes).score; }

EvaluationReport evaluate(const Dataset& gt, const PredictionSet& pred, const MatchPolicy& policy,
                          std::size_t jobs) {
  EvaluationReport report;
  report.videos.resize(gt.videos.size());
  parallel_for(gt.videos.size(), jobs, [&](std::size_t i) {
    const VideoAnnotation& video = gt.videos[i];
    report.videos[i] = video_psc(video, pred.find_video(video.video_id), policy);
  });

  if (report.videos.empty()) return report;
  std::vector<VideoOutcome> outcomes;
  outcomes.reserve(report.videos.size());
  double correct = 0.0;
  double psc_sum = 0.0;
  for (const VideoPsc& v : report.videos) {
    outcomes.push_back({v.video_correct, v.psc});
    correct += v.video_correct ? 1.0 : 0.0;
    psc_sum += v.psc;
    for (std::size_t g = 0; g < kNumPartGroups; ++g) {
      report.groups[g].correct += v.groups[g].correct;
      report.groups[g].total += v.groups[g].total;
    }
  }
  const double n = static_cast<double>(report.videos.size());
  report.video_accuracy = correct / n;
  report.mean_psc = psc_sum / n;
  report.roc_score = roc_score(outcomes);
  return report;
}

void validate(const CostConfig& cfg) {
  if (cfg.clips_per_unit <= 0 || cfg.frames_per_clip <= 0 || cfg.frame_stride <= 0 ||
      !(cfg.flops_per_clip > 0.0) || !(cfg.fps > 0.0) || !(cfg.keyframe_interval_s > 0.0)) {
    throw std::invalid_argument("cost configuration values must all be positive");
  }
}

long inference_units(double video_duration_s, InferenceMode mode, double segment_duration_s,
                     const CostConfig& cfg) {
  validate(cfg);
  if (!(video_duration_s > 0.0)) throw std::invalid_argument("video duration must be > 0");
  const double step = mode == InferenceMode::kFrame ? cfg.keyframe_interval_s : segment_duration_s;
  if (!(step > 0.0)) throw std::invalid_argument("segment duration must be > 0");
  return std::max(1L, static_cast<long>(std::ceil(video_duration_s / step - 1e-9)));
}

double cost_model(double video_duration_s, InferenceMode mode, double segment_duration_s,
                  const CostConfig& cfg) {
  const long units = inference_units(video_duration_s, mode, segment_duration_s, cfg);
  return static_cast<double>(units * cfg.clips_per_unit) * cfg.flops_per_clip;
}

}  // namespace pap
