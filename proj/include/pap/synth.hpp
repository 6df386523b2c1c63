#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pap/anno_model.hpp"
#include "pap/image.hpp"

namespace pap {

struct SynthConfig {
  std::uint64_t seed = 1;
  int n_videos = 8;
  int frames_per_video = 30;
  double fps = 1.0;
  int persons_min = 1;
  int persons_max = 3;
  int image_width = 320;
  int image_height = 240;
  /// Probability that a part instance carries the modal state of its
  /// (video action, part group) pair. Must lie in [1 / n_states, 1].
  double state_skew = 0.977;
  double keypoint_jitter = 3.0;
  /// Probability that each of the ten parts is annotated on a person.
  double part_presence = 0.9;
  int n_actions = 24;
  int n_states = 75;  // including "none"
  bool with_crops = false;
};

/// Throws std::invalid_argument describing the first bad field.
void validate(const SynthConfig& cfg);

/// action_00..action_NN and none, state_01..state_NN.
Vocabulary synthetic_vocabulary(int n_actions, int n_states);

/// The state a (video action, part group) pair is skewed towards. Head is
/// always "none"; other groups draw from a hash of the seed.
StateId synthetic_modal_state(const SynthConfig& cfg, ActionId action, PartGroup group);

/// One rendered person. `pose` is in the crop's pixel frame, whose origin
/// sits at (origin_x, origin_y) of the full frame.
struct PersonCrop {
  std::string video_id;
  int frame_idx = 0;
  std::size_t person = 0;
  std::string file_name;
  int origin_x = 0;
  int origin_y = 0;
  Pose pose;
  Image image;
};

struct SynthOutput {
  Dataset dataset;
  std::vector<PersonCrop> crops;  // empty unless cfg.with_crops
};

/// Deterministic in cfg: each video draws from its own stream seeded by
/// derive_seed(cfg.seed, video index), so `jobs` does not change the output.
SynthOutput generate_dataset(const SynthConfig& cfg, std::size_t jobs = 1);

/// {"crops": [{video_id, frame_idx, person, file, origin, pose}]}
std::string serialize_manifest(const std::vector<PersonCrop>& crops);

struct CorruptionRates {
  double video_flip = 0.0;   // probability of a wrong video action
  double box_jitter = 0.0;   // max absolute offset per person-box coordinate, pixels
  double state_flip = 0.0;   // probability of a wrong part state
};

void validate(const CorruptionRates& rates);

/// Ground truth turned into predictions with controlled error rates. Flipped
/// labels are drawn uniformly from the other vocabulary entries.
PredictionSet corrupt_predictions(const Dataset& gt, const CorruptionRates& rates, std::uint64_t seed);

}  // namespace pap
