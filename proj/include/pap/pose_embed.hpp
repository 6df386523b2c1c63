#pragma once

#include <optional>
#include <vector>

#include "pap/anno_model.hpp"
#include "pap/image.hpp"

namespace pap {

/// Keypoint count of the COCO-style skeleton the synthetic generator emits.
inline constexpr std::size_t kDefaultKeypointCount = 17;

/// How keypoint disks are drawn onto a person crop.
///
/// All keypoints share one radius, r = max(radius_min, radius_ratio * min(w, h))
/// for a w x h crop. A pixel (px, py) belongs to a disk centred at (x, y)
/// iff (px + 0.5 - x)^2 + (py + 0.5 - y)^2 <= r^2; there is no anti-aliasing.
struct EmbedStyle {
  std::vector<Rgb> palette;
  double radius_ratio = 0.02;
  double radius_min = 2.0;
  double conf_threshold = 0.3;

  double radius_for(int crop_width, int crop_height) const;
};

/// Throws std::invalid_argument if the style breaks its invariants
/// (empty or repeated palette colors, radius_min < 1, radius_ratio <= 0).
void validate(const EmbedStyle& style);

/// `n` fully saturated colors at full value with hue k/n of the wheel.
std::vector<Rgb> default_palette(std::size_t n);

EmbedStyle default_style(std::size_t keypoint_count = kDefaultKeypointCount);

/// Composites the keypoint disks onto `crop` with channel-wise saturating
/// addition. Keypoints below the confidence threshold are skipped; disks are
/// drawn in ascending keypoint order. Pixels outside every disk are untouched.
Image render_embedding(const Image& crop, const Pose& pose, const EmbedStyle& style);

struct ImageBounds {
  double width = 0.0;
  double height = 0.0;
};

/// Grows `box` to cover every keypoint with confidence >= conf_threshold,
/// pads by `margin` on each side, then clips to [0, width] x [0, height]
/// (or to the non-negative quadrant when no bounds are given).
BBox refine_box(const BBox& box, const Pose& pose, double conf_threshold, double margin = 0.0,
                std::optional<ImageBounds> bounds = std::nullopt);

}  // namespace pap
