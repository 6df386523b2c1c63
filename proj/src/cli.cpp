#include "pap/cli.hpp"

#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "pap/anno_model.hpp"
#include "pap/baselines.hpp"
#include "pap/evaluator.hpp"
#include "pap/pose_embed.hpp"
#include "pap/rng.hpp"
#include "pap/segmenter.hpp"
#include "pap/synth.hpp"

namespace pap::cli {

namespace {

namespace fs = std::filesystem;

// Bad flag values detected after CLI11 parsing but before any work.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kCorruptionStream = 0x636f7272757074ULL;

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

std::string percent(double fraction) { return fmt::format("{:.2f}", 100.0 * fraction); }

std::string percent_or_na(const std::optional<double>& fraction) {
  return fraction ? percent(*fraction) : std::string("n/a");
}

void emit(std::ostream& out, const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_text_file(out_path, text);
  }
}

void require_usage(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

Pose parse_pose_json(const std::string& text, const std::string& where) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(where, fmt::format("malformed JSON: {}", e.what()));
  }
  const nlohmann::json& list = doc.is_object() && doc.contains("pose") ? doc.at("pose") : doc;
  if (!list.is_array()) throw ValidationError(where, "pose must be an array of [x, y, confidence]");
  Pose pose;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& kp = list[i];
    if (!kp.is_array() || kp.size() != 3 || !kp[0].is_number() || !kp[1].is_number() || !kp[2].is_number()) {
      throw ValidationError(fmt::format("{}/{}", where, i), "keypoint must be [x, y, confidence]");
    }
    pose.keypoints.push_back({kp[0].get<double>(), kp[1].get<double>(), kp[2].get<double>()});
  }
  return pose;
}

// --- validate ---------------------------------------------------------------

struct ValidateOptions {
  std::string anno;
  std::string pred;
};

int run_validate(const ValidateOptions& o, std::ostream& out) {
  const Dataset dataset = parse_dataset(o.anno);
  std::size_t frames = 0, persons = 0, parts = 0;
  for (const VideoAnnotation& v : dataset.videos) {
    frames += v.frames.size();
    for (const FrameAnnotation& f : v.frames) {
      persons += f.persons.size();
      for (const PersonAnnotation& p : f.persons) parts += p.parts.size();
    }
  }
  fmt::print(out, "videos: {}\nframes: {}\npersons: {}\nparts: {}\n", dataset.videos.size(), frames,
             persons, parts);
  if (!o.pred.empty()) {
    const PredictionSet pred = parse_predictions(o.pred, dataset.vocab);
    std::size_t pred_frames = 0;
    for (const VideoPrediction& v : pred.videos) pred_frames += v.frames.size();
    fmt::print(out, "prediction videos: {}\nprediction frames: {}\n", pred.videos.size(), pred_frames);
  }
  return kExitOk;
}

// --- gen-synthetic ----------------------------------------------------------

struct GenOptions {
  SynthConfig cfg;
  std::string out;
  std::string crops_dir;
  std::string pred_out;
  CorruptionRates rates;
};

int run_gen(GenOptions o, const GlobalOptions& g, std::ostream& out) {
  o.cfg.seed = g.seed;
  o.cfg.with_crops = !o.crops_dir.empty();
  try {
    validate(o.cfg);
    validate(o.rates);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const SynthOutput synth = generate_dataset(o.cfg, g.jobs);
  emit(out, o.out, serialize_dataset(synth.dataset));
  if (!o.crops_dir.empty()) {
    fs::create_directories(o.crops_dir);
    for (const PersonCrop& crop : synth.crops) write_png(fs::path(o.crops_dir) / crop.file_name, crop.image);
    write_text_file(fs::path(o.crops_dir) / "manifest.json", serialize_manifest(synth.crops));
  }
  if (!o.pred_out.empty()) {
    const PredictionSet pred = corrupt_predictions(synth.dataset, o.rates, derive_seed(g.seed, kCorruptionStream));
    write_text_file(o.pred_out, serialize_predictions(pred, synth.dataset.vocab));
  }
  return kExitOk;
}

// --- make-segments ----------------------------------------------------------

struct SegmentOptions {
  std::string anno;
  std::string out;
  double duration = kDefaultSegmentDuration;
};

int run_segments(const SegmentOptions& o, std::ostream& out) {
  require_usage(o.duration > 0.0, "--duration must be > 0");
  const Dataset dataset = parse_dataset(o.anno);
  emit(out, o.out, serialize_segment_labels(make_segment_labels(dataset, o.duration), dataset.vocab));
  return kExitOk;
}

// --- render-pose ------------------------------------------------------------

struct RenderOptions {
  std::string crop;
  std::string pose;
  std::string out;
  std::string manifest;
  std::string out_dir;
  double radius_ratio = 0.02;
  double radius_min = 2.0;
  double conf_threshold = 0.3;
  std::size_t palette_size = kDefaultKeypointCount;
};

int run_render(const RenderOptions& o, std::ostream& out) {
  const bool single = !o.crop.empty() || !o.pose.empty() || !o.out.empty();
  const bool batch = !o.manifest.empty() || !o.out_dir.empty();
  require_usage(single != batch, "use either --crop/--pose/--out or --manifest/--out-dir");
  if (single) require_usage(!o.crop.empty() && !o.pose.empty() && !o.out.empty(), "--crop, --pose and --out are all required");
  if (batch) require_usage(!o.manifest.empty() && !o.out_dir.empty(), "--manifest and --out-dir are both required");
  require_usage(o.palette_size >= 1, "--palette-size must be >= 1");

  EmbedStyle style;
  style.palette = default_palette(o.palette_size);
  style.radius_ratio = o.radius_ratio;
  style.radius_min = o.radius_min;
  style.conf_threshold = o.conf_threshold;
  try {
    validate(style);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (single) {
    const Pose pose = parse_pose_json(read_text_file(o.pose), "");
    write_png(o.out, render_embedding(read_png(o.crop), pose, style));
    fmt::print(out, "rendered 1 crop\n");
    return kExitOk;
  }

  const nlohmann::json manifest = nlohmann::json::parse(read_text_file(o.manifest));
  const fs::path base = fs::path(o.manifest).parent_path();
  fs::create_directories(o.out_dir);
  std::size_t count = 0;
  const auto& crops = manifest.at("crops");
  for (std::size_t i = 0; i < crops.size(); ++i) {
    const auto& entry = crops[i];
    const std::string file = entry.at("file").get<std::string>();
    const Pose pose = parse_pose_json(entry.at("pose").dump(), fmt::format("/crops/{}/pose", i));
    write_png(fs::path(o.out_dir) / file, render_embedding(read_png(base / file), pose, style));
    ++count;
  }
  fmt::print(out, "rendered {} crops\n", count);
  return kExitOk;
}

// --- refine-boxes -----------------------------------------------------------

struct RefineOptions {
  std::string vocab;
  std::string pred;
  std::string out;
  double conf_threshold = 0.3;
  double margin = 0.0;
  double image_width = 0.0;
  double image_height = 0.0;
};

int run_refine(const RefineOptions& o, std::ostream& out) {
  require_usage(o.margin >= 0.0, "--margin must be >= 0");
  require_usage((o.image_width > 0.0) == (o.image_height > 0.0),
                "--image-width and --image-height go together");
  const Dataset source = parse_dataset(o.vocab);
  PredictionSet pred = parse_predictions(o.pred, source.vocab);
  std::optional<ImageBounds> bounds;
  if (o.image_width > 0.0) bounds = ImageBounds{o.image_width, o.image_height};
  std::size_t grown = 0;
  for (VideoPrediction& video : pred.videos) {
    for (FramePrediction& frame : video.frames) {
      for (PersonPrediction& person : frame.persons) {
        if (!person.pose) continue;
        const BBox refined = refine_box(person.box, *person.pose, o.conf_threshold, o.margin, bounds);
        if (!(refined == person.box)) ++grown;
        person.box = refined;
      }
    }
  }
  validate(pred, source.vocab);
  emit(out, o.out, serialize_predictions(pred, source.vocab));
  if (!o.out.empty()) fmt::print(out, "refined {} person boxes\n", grown);
  return kExitOk;
}

// --- baseline-predict -------------------------------------------------------

struct BaselineOptions {
  std::string train;
  std::string test;
  std::string out;
  std::string mode = "modal";
};

int run_baseline(const BaselineOptions& o, std::ostream& out) {
  const Dataset test = parse_dataset(o.test);
  PredictionSet pred;
  if (o.mode == "modal") {
    require_usage(!o.train.empty(), "--train is required for --mode modal");
    const Dataset train = parse_dataset(o.train);
    if (!(train.vocab == test.vocab)) throw ValidationError("/vocab", "train and test vocabularies differ");
    pred = predict_mode(fit_mode_table(train.videos, train.vocab), test);
  } else if (o.mode.starts_with("constant:")) {
    const std::string name = o.mode.substr(std::string_view("constant:").size());
    const auto state = test.vocab.find_state(name);
    require_usage(state.has_value(), fmt::format("unknown state '{}' in --mode", name));
    pred = predict_constant(test, *state);
  } else if (o.mode == "segments" || o.mode.starts_with("segments:")) {
    double duration = kDefaultSegmentDuration;
    if (o.mode.size() > std::string_view("segments").size()) {
      try {
        duration = std::stod(o.mode.substr(std::string_view("segments:").size()));
      } catch (const std::exception&) {
        throw UsageError(fmt::format("bad segment duration in --mode '{}'", o.mode));
      }
    }
    require_usage(duration > 0.0, "segment duration must be > 0");
    pred = assemble_predictions(oracle_assembly_inputs(test, duration));
  } else {
    throw UsageError(fmt::format("unknown --mode '{}'", o.mode));
  }
  emit(out, o.out, serialize_predictions(pred, test.vocab));
  return kExitOk;
}

// --- score ------------------------------------------------------------------

struct ScoreOptions {
  std::string gt;
  std::string pred;
  std::string report;
  std::string format = "text";
  double iou = 0.5;
};

int run_score(const ScoreOptions& o, const GlobalOptions& g, std::ostream& out) {
  require_usage(o.iou > 0.0 && o.iou <= 1.0, "--iou must lie in (0, 1]");
  const Dataset gt = parse_dataset(o.gt);
  const PredictionSet pred = parse_predictions(o.pred, gt.vocab);
  if (gt.videos.empty()) throw ValidationError("/videos", "ground truth has no videos to score");
  const EvaluationReport report = evaluate(gt, pred, MatchPolicy{o.iou}, g.jobs);

  auto group_accuracy = [&](PartGroup group) -> std::optional<double> {
    const GroupCounts& c = report.groups[index_of(group)];
    if (c.total == 0) return std::nullopt;
    return static_cast<double>(c.correct) / static_cast<double>(c.total);
  };

  if (o.format == "json") {
    nlohmann::ordered_json doc;
    doc["video_accuracy"] = percent(report.video_accuracy);
    doc["mean_psc"] = percent(report.mean_psc);
    doc["roc_score"] = percent(report.roc_score);
    nlohmann::ordered_json groups;
    for (PartGroup group : kAllPartGroups) groups[std::string(to_string(group))] = percent_or_na(group_accuracy(group));
    doc["group_state_accuracy"] = std::move(groups);
    out << doc.dump(2) << "\n";
  } else if (o.format == "csv") {
    out << "metric,value\n";
    fmt::print(out, "video_accuracy,{}\nmean_psc,{}\nroc_score,{}\n", percent(report.video_accuracy),
               percent(report.mean_psc), percent(report.roc_score));
    for (PartGroup group : kAllPartGroups) {
      fmt::print(out, "{}_state_accuracy,{}\n", to_string(group), percent_or_na(group_accuracy(group)));
    }
  } else {
    fmt::print(out, "video top-1 accuracy: {}\nmean PSC: {}\nROC score: {}\n", percent(report.video_accuracy),
               percent(report.mean_psc), percent(report.roc_score));
    for (PartGroup group : kAllPartGroups) {
      fmt::print(out, "{} state accuracy: {}\n", to_string(group), percent_or_na(group_accuracy(group)));
    }
  }

  if (!o.report.empty()) {
    std::ostringstream csv;
    csv << "video_id,psc,video_correct\n";
    for (const VideoPsc& v : report.videos) fmt::print(csv, "{},{},{}\n", v.video_id, v.psc, v.video_correct ? 1 : 0);
    write_text_file(o.report, csv.str());
  }
  return kExitOk;
}

// --- score-det --------------------------------------------------------------

struct ScoreDetOptions {
  std::string gt;
  std::string pred;
  std::string format = "text";
};

int run_score_det(const ScoreDetOptions& o, std::ostream& out) {
  const Dataset gt = parse_dataset(o.gt);
  const PredictionSet pred = parse_predictions(o.pred, gt.vocab);
  const std::vector<CategoryAp> rows = detection_report(gt, pred);
  if (o.format == "json") {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const CategoryAp& r : rows) {
      nlohmann::ordered_json j;
      j["category"] = r.category;
      j["gt"] = r.gt_count;
      j["predictions"] = r.prediction_count;
      j["ap"] = percent_or_na(r.ap);
      j["ap50"] = percent_or_na(r.ap50);
      doc.push_back(std::move(j));
    }
    out << doc.dump(2) << "\n";
  } else if (o.format == "csv") {
    out << "category,gt,predictions,ap,ap50\n";
    for (const CategoryAp& r : rows) {
      fmt::print(out, "{},{},{},{},{}\n", r.category, r.gt_count, r.prediction_count, percent_or_na(r.ap),
                 percent_or_na(r.ap50));
    }
  } else {
    fmt::print(out, "{:<12}{:>8}{:>8}{:>9}{:>9}\n", "category", "gt", "pred", "AP", "AP@50");
    for (const CategoryAp& r : rows) {
      fmt::print(out, "{:<12}{:>8}{:>8}{:>9}{:>9}\n", r.category, r.gt_count, r.prediction_count,
                 percent_or_na(r.ap), percent_or_na(r.ap50));
    }
  }
  return kExitOk;
}

// --- cost -------------------------------------------------------------------

struct CostOptions {
  double duration = 0.0;
  double segment_duration = kDefaultSegmentDuration;
  CostConfig cfg;
};

int run_cost(const CostOptions& o, std::ostream& out) {
  require_usage(o.duration > 0.0, "--duration must be > 0");
  require_usage(o.segment_duration > 0.0, "--segment-duration must be > 0");
  try {
    validate(o.cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const double frame = cost_model(o.duration, InferenceMode::kFrame, o.segment_duration, o.cfg);
  const double segment = cost_model(o.duration, InferenceMode::kSegment, o.segment_duration, o.cfg);
  fmt::print(out, "frame mode: {} units, {:.3f} TFLOPs\n",
             inference_units(o.duration, InferenceMode::kFrame, o.segment_duration, o.cfg), frame);
  fmt::print(out, "segment mode: {} units, {:.3f} TFLOPs\n",
             inference_units(o.duration, InferenceMode::kSegment, o.segment_duration, o.cfg), segment);
  fmt::print(out, "reduction: {}%\n", percent(1.0 - segment / frame));
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Part-level action parsing toolkit: data, pseudo-labels, pose embedding and scoring", "pap"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read flags from a TOML/INI file; command-line flags take precedence");

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for every randomized stage")->capture_default_str();
  app.add_option("--jobs", global.jobs, "Worker threads; results do not depend on it")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  ValidateOptions validate_opts;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and check an annotation (and prediction) file");
  validate_cmd->add_option("--anno", validate_opts.anno, "Annotation JSON")->required();
  validate_cmd->add_option("--pred", validate_opts.pred, "Prediction JSON checked against the annotation vocabulary");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-synthetic", "Generate a seeded synthetic dataset");
  gen_cmd->add_option("--out", gen.out, "Annotation JSON output (stdout if omitted)");
  gen_cmd->add_option("--videos", gen.cfg.n_videos, "Number of videos")->capture_default_str();
  gen_cmd->add_option("--frames", gen.cfg.frames_per_video, "Annotated frames per video")->capture_default_str();
  gen_cmd->add_option("--fps", gen.cfg.fps, "Annotated frames per second")->capture_default_str();
  gen_cmd->add_option("--persons-min", gen.cfg.persons_min, "Minimum persons per frame")->capture_default_str();
  gen_cmd->add_option("--persons-max", gen.cfg.persons_max, "Maximum persons per frame")->capture_default_str();
  gen_cmd->add_option("--width", gen.cfg.image_width, "Frame width in pixels")->capture_default_str();
  gen_cmd->add_option("--height", gen.cfg.image_height, "Frame height in pixels")->capture_default_str();
  gen_cmd->add_option("--state-skew", gen.cfg.state_skew, "Probability of the modal part state")->capture_default_str();
  gen_cmd->add_option("--keypoint-jitter", gen.cfg.keypoint_jitter, "Keypoint jitter in pixels")->capture_default_str();
  gen_cmd->add_option("--part-presence", gen.cfg.part_presence, "Probability each part is annotated")->capture_default_str();
  gen_cmd->add_option("--actions", gen.cfg.n_actions, "Video action vocabulary size")->capture_default_str();
  gen_cmd->add_option("--states", gen.cfg.n_states, "Part state vocabulary size including none")->capture_default_str();
  gen_cmd->add_option("--crops-dir", gen.crops_dir, "Write person crop PNGs and manifest.json here");
  gen_cmd->add_option("--pred-out", gen.pred_out, "Also write corrupted ground truth as predictions");
  gen_cmd->add_option("--video-flip", gen.rates.video_flip, "Probability of a wrong video action")->capture_default_str();
  gen_cmd->add_option("--box-jitter", gen.rates.box_jitter, "Person box jitter in pixels")->capture_default_str();
  gen_cmd->add_option("--state-flip", gen.rates.state_flip, "Probability of a wrong part state")->capture_default_str();

  SegmentOptions seg;
  auto* seg_cmd = app.add_subcommand("make-segments", "Emit segment-level pseudo labels");
  seg_cmd->add_option("--anno", seg.anno, "Annotation JSON")->required();
  seg_cmd->add_option("--duration", seg.duration, "Segment duration in seconds")->capture_default_str();
  seg_cmd->add_option("--out", seg.out, "Output JSON (stdout if omitted)");

  RenderOptions render;
  auto* render_cmd = app.add_subcommand("render-pose", "Composite keypoint disks onto person crops");
  render_cmd->add_option("--crop", render.crop, "Input crop PNG");
  render_cmd->add_option("--pose", render.pose, "Pose JSON, [[x, y, confidence], ...] in crop pixels");
  render_cmd->add_option("--out", render.out, "Output PNG");
  render_cmd->add_option("--manifest", render.manifest, "Crop manifest written by gen-synthetic");
  render_cmd->add_option("--out-dir", render.out_dir, "Output directory for manifest mode");
  render_cmd->add_option("--radius-ratio", render.radius_ratio, "Disk radius relative to min(crop w, h)")->capture_default_str();
  render_cmd->add_option("--radius-min", render.radius_min, "Minimum disk radius in pixels")->capture_default_str();
  render_cmd->add_option("--conf-threshold", render.conf_threshold, "Skip keypoints below this confidence")->capture_default_str();
  render_cmd->add_option("--palette-size", render.palette_size, "Number of hue-separated colors")->capture_default_str();

  RefineOptions refine;
  auto* refine_cmd = app.add_subcommand("refine-boxes", "Grow person boxes to cover confident keypoints");
  refine_cmd->add_option("--vocab", refine.vocab, "Annotation JSON supplying the vocabulary")->required();
  refine_cmd->add_option("--pred", refine.pred, "Prediction JSON with person poses")->required();
  refine_cmd->add_option("--out", refine.out, "Output prediction JSON (stdout if omitted)");
  refine_cmd->add_option("--conf-threshold", refine.conf_threshold, "Keypoint confidence threshold")->capture_default_str();
  refine_cmd->add_option("--margin", refine.margin, "Padding in pixels on each side")->capture_default_str();
  refine_cmd->add_option("--image-width", refine.image_width, "Clip to this frame width");
  refine_cmd->add_option("--image-height", refine.image_height, "Clip to this frame height");

  BaselineOptions baseline;
  auto* baseline_cmd = app.add_subcommand("baseline-predict", "Reference predictors on oracle boxes");
  baseline_cmd->add_option("--train", baseline.train, "Training annotation JSON (modal mode)");
  baseline_cmd->add_option("--test", baseline.test, "Test annotation JSON")->required();
  baseline_cmd->add_option("--out", baseline.out, "Output prediction JSON (stdout if omitted)");
  baseline_cmd->add_option("--mode", baseline.mode, "modal | constant:<state> | segments[:<seconds>]")->capture_default_str();

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "Video accuracy, mean PSC and ROC score");
  score_cmd->add_option("--gt", score.gt, "Ground-truth annotation JSON")->required();
  score_cmd->add_option("--pred", score.pred, "Prediction JSON")->required();
  score_cmd->add_option("--iou", score.iou, "IoU threshold for person and part matches")->capture_default_str();
  score_cmd->add_option("--report", score.report, "Per-video CSV (video_id, psc, video_correct)");
  score_cmd->add_option("--format", score.format, "text | json | csv")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "json", "csv"}));

  ScoreDetOptions score_det;
  auto* score_det_cmd = app.add_subcommand("score-det", "AP and AP@50 for persons and each part category");
  score_det_cmd->add_option("--gt", score_det.gt, "Ground-truth annotation JSON")->required();
  score_det_cmd->add_option("--pred", score_det.pred, "Prediction JSON")->required();
  score_det_cmd->add_option("--format", score_det.format, "text | json | csv")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "json", "csv"}));

  CostOptions cost;
  auto* cost_cmd = app.add_subcommand("cost", "Recognizer TFLOPs, frame-level versus segment-level");
  cost_cmd->add_option("--duration", cost.duration, "Video duration in seconds")->required();
  cost_cmd->add_option("--segment-duration", cost.segment_duration, "Segment duration in seconds")->capture_default_str();
  cost_cmd->add_option("--keyframe-interval", cost.cfg.keyframe_interval_s, "Seconds between keyframes")->capture_default_str();
  cost_cmd->add_option("--clips", cost.cfg.clips_per_unit, "Sampled clips per keyframe or segment")->capture_default_str();
  cost_cmd->add_option("--frames-per-clip", cost.cfg.frames_per_clip, "Frames per clip")->capture_default_str();
  cost_cmd->add_option("--frame-stride", cost.cfg.frame_stride, "Temporal stride within a clip")->capture_default_str();
  cost_cmd->add_option("--flops-per-clip", cost.cfg.flops_per_clip, "TFLOP per clip")->capture_default_str();
  cost_cmd->add_option("--fps", cost.cfg.fps, "Video frame rate")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    std::string message = e.what();
    // The first bare word after the global options names the subcommand.
    for (std::size_t i = 0; i < args.size(); ++i) {
      const std::string& a = args[i];
      if (a == "--seed" || a == "--jobs" || a == "--config") {
        ++i;
        continue;
      }
      if (a.starts_with("-")) continue;
      if (app.get_subcommand_no_throw(a) == nullptr) message = fmt::format("unknown subcommand '{}'", a);
      break;
    }
    fmt::print(err, "usage error: {}\n{}", message, app.help());
    return kExitUsage;
  }

  try {
    if (*validate_cmd) return run_validate(validate_opts, out);
    if (*gen_cmd) return run_gen(gen, global, out);
    if (*seg_cmd) return run_segments(seg, out);
    if (*render_cmd) return run_render(render, out);
    if (*refine_cmd) return run_refine(refine, out);
    if (*baseline_cmd) return run_baseline(baseline, out);
    if (*score_cmd) return run_score(score, global, out);
    if (*score_det_cmd) return run_score_det(score_det, out);
    if (*cost_cmd) return run_cost(cost, out);
  } catch (const UsageError& e) {
    fmt::print(err, "usage error: {}\n{}", e.what(), app.help());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace pap::cli
