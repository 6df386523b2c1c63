#include "pap/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pap/parallel.hpp"
#include "pap/rng.hpp"

namespace pap {

namespace {

struct Point {
  double u;
  double v;
};

struct Rect {
  double u0, v0, u1, v1;
};

// COCO keypoint order; the figure faces the camera so its left side is on the image right.
constexpr std::array<Point, 17> kSkeleton = {{
    {0.50, 0.08},                // nose
    {0.54, 0.06}, {0.46, 0.06},  // eyes
    {0.58, 0.08}, {0.42, 0.08},  // ears
    {0.68, 0.22}, {0.32, 0.22},  // shoulders
    {0.78, 0.38}, {0.22, 0.38},  // elbows
    {0.84, 0.54}, {0.16, 0.54},  // wrists
    {0.60, 0.52}, {0.40, 0.52},  // hips
    {0.60, 0.74}, {0.40, 0.74},  // knees
    {0.60, 0.94}, {0.40, 0.94},  // ankles
}};

// Silhouette rectangle per PartCategory, relative to the person box.
constexpr std::array<Rect, kNumPartCategories> kPartRects = {{
    {0.38, 0.00, 0.62, 0.16},  // head
    {0.66, 0.20, 0.86, 0.50},  // left_arm
    {0.14, 0.20, 0.34, 0.50},  // right_arm
    {0.78, 0.50, 0.96, 0.60},  // left_hand
    {0.04, 0.50, 0.22, 0.60},  // right_hand
    {0.34, 0.44, 0.66, 0.58},  // hip
    {0.50, 0.58, 0.68, 0.90},  // left_leg
    {0.32, 0.58, 0.50, 0.90},  // right_leg
    {0.52, 0.90, 0.72, 1.00},  // left_foot
    {0.28, 0.90, 0.48, 1.00},  // right_foot
}};

constexpr std::array<Rgb, kNumPartCategories> kPartColors = {{
    {200, 170, 150}, {90, 110, 160}, {80, 100, 150}, {210, 180, 160}, {200, 170, 150},
    {60, 60, 80},    {70, 90, 70},   {60, 80, 60},   {40, 40, 40},    {50, 50, 50},
}};

constexpr std::uint64_t kModalSalt = 0x6d6f64616c5f7374ULL;

// Two decimals keeps serialized files short while staying exactly representable in text.
double quantize(double v) { return std::round(v * 100.0) / 100.0; }

BBox sub_box(const BBox& outer, const Rect& r) {
  const double w = outer.width();
  const double h = outer.height();
  return {quantize(outer.x_min + r.u0 * w), quantize(outer.y_min + r.v0 * h),
          quantize(outer.x_min + r.u1 * w), quantize(outer.y_min + r.v1 * h)};
}

StateId draw_state(Rng& rng, StateId modal, double skew, int n_states) {
  if (rng.uniform() < skew || n_states == 1) return modal;
  // Uniform over the n_states - 1 other states.
  const auto other = static_cast<StateId>(rng.below(static_cast<std::uint64_t>(n_states - 1)));
  return other >= modal ? other + 1 : other;
}

PersonAnnotation make_person(Rng& rng, const SynthConfig& cfg,
                             const std::array<StateId, kNumPartGroups>& modal) {
  const double img_w = cfg.image_width;
  const double img_h = cfg.image_height;
  const double h = std::min(img_h, quantize(rng.uniform(0.4, 0.9) * img_h));
  const double w = std::min(img_w, quantize(h * rng.uniform(0.35, 0.6)));
  const double x0 = quantize(rng.uniform(0.0, img_w - w));
  const double y0 = quantize(rng.uniform(0.0, img_h - h));

  PersonAnnotation person;
  person.box = {x0, y0, std::min(img_w, x0 + w), std::min(img_h, y0 + h)};

  Pose pose;
  pose.keypoints.reserve(kSkeleton.size());
  const double j = cfg.keypoint_jitter;
  for (const Point& p : kSkeleton) {
    const double x = person.box.x_min + p.u * person.box.width() + rng.uniform(-j, j);
    const double y = person.box.y_min + p.v * person.box.height() + rng.uniform(-j, j);
    pose.keypoints.push_back({quantize(std::clamp(x, 0.0, img_w)), quantize(std::clamp(y, 0.0, img_h)),
                              quantize(rng.uniform(0.05, 1.0))});
  }
  person.pose = std::move(pose);

  for (PartCategory c : kAllPartCategories) {
    if (!(rng.uniform() < cfg.part_presence)) continue;
    const StateId state = draw_state(rng, modal[index_of(group_of(c))], cfg.state_skew, cfg.n_states);
    person.parts.push_back({c, sub_box(person.box, kPartRects[index_of(c)]), state});
  }
  return person;
}

PersonCrop render_crop(Rng& rng, const VideoAnnotation& video, int frame_idx, std::size_t index,
                       const PersonAnnotation& person) {
  PersonCrop crop;
  crop.video_id = video.video_id;
  crop.frame_idx = frame_idx;
  crop.person = index;
  crop.file_name = fmt::format("{}_f{:04d}_p{}.png", video.video_id, frame_idx, index);
  crop.origin_x = static_cast<int>(std::floor(person.box.x_min));
  crop.origin_y = static_cast<int>(std::floor(person.box.y_min));
  const int x1 = static_cast<int>(std::ceil(person.box.x_max));
  const int y1 = static_cast<int>(std::ceil(person.box.y_max));

  const Rgb background = {static_cast<std::uint8_t>(rng.below(256)),
                          static_cast<std::uint8_t>(rng.below(256)),
                          static_cast<std::uint8_t>(rng.below(256))};
  crop.image = Image(x1 - crop.origin_x, y1 - crop.origin_y, background);
  for (const PartAnnotation& part : person.parts) {
    crop.image.fill_rect(static_cast<int>(std::floor(part.box.x_min)) - crop.origin_x,
                         static_cast<int>(std::floor(part.box.y_min)) - crop.origin_y,
                         static_cast<int>(std::ceil(part.box.x_max)) - crop.origin_x,
                         static_cast<int>(std::ceil(part.box.y_max)) - crop.origin_y,
                         kPartColors[index_of(part.category)]);
  }
  if (person.pose) {
    for (const Keypoint& kp : person.pose->keypoints) {
      crop.pose.keypoints.push_back({kp.x - crop.origin_x, kp.y - crop.origin_y, kp.confidence});
    }
  }
  return crop;
}

}  // namespace

void validate(const SynthConfig& cfg) {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (cfg.n_videos < 1) fail("n_videos must be >= 1");
  if (cfg.frames_per_video < 1) fail("frames_per_video must be >= 1");
  if (!(cfg.fps > 0.0)) fail("fps must be > 0");
  if (cfg.persons_min < 1 || cfg.persons_max < cfg.persons_min) {
    fail("persons_per_frame range must satisfy 1 <= min <= max");
  }
  if (cfg.persons_max > static_cast<int>(kMaxPersonsPerFrame)) {
    fail(fmt::format("persons_max must be <= {}", kMaxPersonsPerFrame));
  }
  if (cfg.image_width < 16 || cfg.image_height < 16) fail("image size must be at least 16x16");
  if (cfg.n_actions < 1) fail("n_actions must be >= 1");
  if (cfg.n_states < 1) fail("n_states must be >= 1");
  if (!(cfg.state_skew >= 1.0 / cfg.n_states && cfg.state_skew <= 1.0)) {
    fail(fmt::format("state_skew must lie in [1/{}, 1]", cfg.n_states));
  }
  if (!(cfg.keypoint_jitter >= 0.0)) fail("keypoint_jitter must be >= 0");
  if (!(cfg.part_presence >= 0.0 && cfg.part_presence <= 1.0)) fail("part_presence must lie in [0, 1]");
}

Vocabulary synthetic_vocabulary(int n_actions, int n_states) {
  Vocabulary vocab;
  for (int a = 0; a < n_actions; ++a) vocab.video_actions.push_back(fmt::format("action_{:02d}", a));
  vocab.part_states.emplace_back(kNoneStateName);
  for (int s = 1; s < n_states; ++s) vocab.part_states.push_back(fmt::format("state_{:02d}", s));
  return vocab;
}

StateId synthetic_modal_state(const SynthConfig& cfg, ActionId action, PartGroup group) {
  if (group == PartGroup::kHead) return kNoneState;
  const std::uint64_t key = static_cast<std::uint64_t>(action) * kNumPartGroups + index_of(group);
  return static_cast<StateId>(derive_seed(cfg.seed ^ kModalSalt, key) % static_cast<std::uint64_t>(cfg.n_states));
}

SynthOutput generate_dataset(const SynthConfig& cfg, std::size_t jobs) {
  validate(cfg);
  SynthOutput out;
  out.dataset.vocab = synthetic_vocabulary(cfg.n_actions, cfg.n_states);
  out.dataset.videos.resize(static_cast<std::size_t>(cfg.n_videos));
  std::vector<std::vector<PersonCrop>> crops(out.dataset.videos.size());

  parallel_for(out.dataset.videos.size(), jobs, [&](std::size_t v) {
    Rng rng(derive_seed(cfg.seed, v));
    VideoAnnotation& video = out.dataset.videos[v];
    video.video_id = fmt::format("synth_{:05d}", v);
    video.action = static_cast<ActionId>(rng.below(static_cast<std::uint64_t>(cfg.n_actions)));
    video.fps = cfg.fps;
    video.duration_s = cfg.frames_per_video / cfg.fps;

    std::array<StateId, kNumPartGroups> modal{};
    for (PartGroup g : kAllPartGroups) modal[index_of(g)] = synthetic_modal_state(cfg, video.action, g);

    // Pixel content uses a second stream so labels do not depend on with_crops.
    Rng pixel_rng(derive_seed(~cfg.seed, v));
    video.frames.resize(static_cast<std::size_t>(cfg.frames_per_video));
    for (int f = 0; f < cfg.frames_per_video; ++f) {
      FrameAnnotation& frame = video.frames[static_cast<std::size_t>(f)];
      frame.frame_idx = f;
      const int persons = rng.between(cfg.persons_min, cfg.persons_max);
      for (int p = 0; p < persons; ++p) {
        frame.persons.push_back(make_person(rng, cfg, modal));
        if (cfg.with_crops) {
          crops[v].push_back(render_crop(pixel_rng, video, f, static_cast<std::size_t>(p), frame.persons.back()));
        }
      }
    }
  });

  for (auto& c : crops) {
    out.crops.insert(out.crops.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
  }
  return out;
}

std::string serialize_manifest(const std::vector<PersonCrop>& crops) {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const PersonCrop& crop : crops) {
    nlohmann::ordered_json j;
    j["video_id"] = crop.video_id;
    j["frame_idx"] = crop.frame_idx;
    j["person"] = crop.person;
    j["file"] = crop.file_name;
    j["origin"] = {crop.origin_x, crop.origin_y};
    nlohmann::ordered_json pose = nlohmann::ordered_json::array();
    for (const Keypoint& kp : crop.pose.keypoints) pose.push_back({kp.x, kp.y, kp.confidence});
    j["pose"] = std::move(pose);
    list.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["crops"] = std::move(list);
  return doc.dump(2) + "\n";
}

void validate(const CorruptionRates& rates) {
  if (!(rates.video_flip >= 0.0 && rates.video_flip <= 1.0)) {
    throw std::invalid_argument("video_flip must lie in [0, 1]");
  }
  if (!(rates.state_flip >= 0.0 && rates.state_flip <= 1.0)) {
    throw std::invalid_argument("state_flip must lie in [0, 1]");
  }
  if (!(rates.box_jitter >= 0.0 && std::isfinite(rates.box_jitter))) {
    throw std::invalid_argument("box_jitter must be a finite value >= 0");
  }
}

PredictionSet corrupt_predictions(const Dataset& gt, const CorruptionRates& rates, std::uint64_t seed) {
  validate(rates);
  const auto n_actions = static_cast<std::uint64_t>(gt.vocab.video_actions.size());
  const auto n_states = static_cast<std::uint64_t>(gt.vocab.part_states.size());
  PredictionSet out = as_predictions(gt);

  for (std::size_t v = 0; v < out.videos.size(); ++v) {
    Rng rng(derive_seed(seed, v));
    VideoPrediction& video = out.videos[v];
    if (rng.uniform() < rates.video_flip && n_actions > 1) {
      const auto shift = 1 + rng.below(n_actions - 1);
      video.action = static_cast<ActionId>((static_cast<std::uint64_t>(video.action) + shift) % n_actions);
    }
    for (FramePrediction& frame : video.frames) {
      for (PersonPrediction& person : frame.persons) {
        if (rates.box_jitter > 0.0) {
          const double j = rates.box_jitter;
          BBox b = person.box;
          b.x_min = std::max(0.0, b.x_min + rng.uniform(-j, j));
          b.y_min = std::max(0.0, b.y_min + rng.uniform(-j, j));
          b.x_max = std::max(b.x_min + 1.0, b.x_max + rng.uniform(-j, j));
          b.y_max = std::max(b.y_min + 1.0, b.y_max + rng.uniform(-j, j));
          person.box = b;
        }
        for (PartPrediction& part : person.parts) {
          if (rng.uniform() < rates.state_flip && n_states > 1) {
            const auto shift = 1 + rng.below(n_states - 1);
            part.state = static_cast<StateId>((static_cast<std::uint64_t>(part.state) + shift) % n_states);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace pap
