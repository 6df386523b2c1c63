#include "pap/pose_embed.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace pap {

namespace {

// round(255 * num / den) for 0 <= num <= den, in integers.
std::uint8_t scaled_byte(std::uint64_t num, std::uint64_t den) {
  return static_cast<std::uint8_t>((2 * 255 * num + den) / (2 * den));
}

std::uint8_t saturating_add(std::uint8_t a, std::uint8_t b) {
  const unsigned sum = unsigned{a} + unsigned{b};
  return static_cast<std::uint8_t>(std::min(sum, 255u));
}

// Pixel index range [lo, hi] that can intersect [center - r, center + r]
// under the pixel-centre test, clamped to [0, extent - 1].
std::pair<int, int> pixel_span(double center, double r, int extent) {
  const double lo = std::floor(center - r - 0.5) - 1.0;
  const double hi = std::ceil(center + r - 0.5) + 1.0;
  const double max_index = static_cast<double>(extent - 1);
  return {static_cast<int>(std::clamp(lo, 0.0, max_index)),
          static_cast<int>(std::clamp(hi, -1.0, max_index))};
}

}  // namespace

double EmbedStyle::radius_for(int crop_width, int crop_height) const {
  return std::max(radius_min, radius_ratio * static_cast<double>(std::min(crop_width, crop_height)));
}

void validate(const EmbedStyle& style) {
  if (style.palette.empty()) throw std::invalid_argument("palette must not be empty");
  std::set<Rgb> distinct(style.palette.begin(), style.palette.end());
  if (distinct.size() != style.palette.size()) {
    throw std::invalid_argument("palette colors must be pairwise distinct");
  }
  if (!(style.radius_min >= 1.0)) throw std::invalid_argument("radius_min must be >= 1");
  if (!(style.radius_ratio > 0.0)) throw std::invalid_argument("radius_ratio must be > 0");
  if (!(style.conf_threshold >= 0.0 && style.conf_threshold <= 1.0)) {
    throw std::invalid_argument("conf_threshold must lie in [0, 1]");
  }
}

std::vector<Rgb> default_palette(std::size_t n) {
  if (n == 0) throw std::invalid_argument("palette size must be >= 1");
  std::vector<Rgb> colors;
  colors.reserve(n);
  const std::uint64_t den = n;
  for (std::uint64_t k = 0; k < n; ++k) {
    // hue = k/n turns; sector and fractional position within it, exactly.
    const std::uint64_t sector = (6 * k) / den;
    const std::uint64_t rem = (6 * k) % den;
    const std::uint8_t up = scaled_byte(rem, den);
    const std::uint8_t down = scaled_byte(den - rem, den);
    switch (sector) {
      case 0: colors.push_back({255, up, 0}); break;
      case 1: colors.push_back({down, 255, 0}); break;
      case 2: colors.push_back({0, 255, up}); break;
      case 3: colors.push_back({0, down, 255}); break;
      case 4: colors.push_back({up, 0, 255}); break;
      default: colors.push_back({255, 0, down}); break;
    }
  }
  return colors;
}

EmbedStyle default_style(std::size_t keypoint_count) {
  EmbedStyle style;
  style.palette = default_palette(keypoint_count);
  return style;
}

Image render_embedding(const Image& crop, const Pose& pose, const EmbedStyle& style) {
  if (!crop.consistent()) {
    throw std::invalid_argument(fmt::format("image buffer holds {} samples, {}x{}x3 declared",
                                            crop.pixels.size(), crop.width, crop.height));
  }
  validate(style);
  if (pose.size() > style.palette.size()) {
    throw std::invalid_argument(fmt::format("pose has {} keypoints but palette only {} colors",
                                            pose.size(), style.palette.size()));
  }
  Image out = crop;
  if (crop.width == 0 || crop.height == 0) return out;

  const double r = style.radius_for(crop.width, crop.height);
  const double r2 = r * r;
  for (std::size_t i = 0; i < pose.size(); ++i) {
    const Keypoint& kp = pose.keypoints[i];
    if (!(kp.confidence >= style.conf_threshold)) continue;
    if (!std::isfinite(kp.x) || !std::isfinite(kp.y)) {
      throw std::invalid_argument(fmt::format("keypoint {} has non-finite coordinates", i));
    }
    const Rgb& color = style.palette[i];
    const auto [x0, x1] = pixel_span(kp.x, r, crop.width);
    const auto [y0, y1] = pixel_span(kp.y, r, crop.height);
    for (int py = y0; py <= y1; ++py) {
      const double dy = static_cast<double>(py) + 0.5 - kp.y;
      for (int px = x0; px <= x1; ++px) {
        const double dx = static_cast<double>(px) + 0.5 - kp.x;
        if (dx * dx + dy * dy > r2) continue;
        auto pixel = out.at(px, py);
        for (int c = 0; c < 3; ++c) pixel[c] = saturating_add(pixel[c], color[c]);
      }
    }
  }
  return out;
}

BBox refine_box(const BBox& box, const Pose& pose, double conf_threshold, double margin,
                std::optional<ImageBounds> bounds) {
  BBox out = box;
  for (const Keypoint& kp : pose.keypoints) {
    if (!(kp.confidence >= conf_threshold)) continue;
    out.x_min = std::min(out.x_min, kp.x);
    out.y_min = std::min(out.y_min, kp.y);
    out.x_max = std::max(out.x_max, kp.x);
    out.y_max = std::max(out.y_max, kp.y);
  }
  out.x_min = std::max(out.x_min - margin, 0.0);
  out.y_min = std::max(out.y_min - margin, 0.0);
  out.x_max += margin;
  out.y_max += margin;
  if (bounds) {
    out.x_max = std::min(out.x_max, bounds->width);
    out.y_max = std::min(out.y_max, bounds->height);
  }
  return out;
}

}  // namespace pap
