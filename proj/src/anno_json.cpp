// JSON encoding of datasets and prediction sets.

#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pap/anno_model.hpp"

namespace pap {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// A JSON value paired with its pointer path so every error can name its location.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }

  [[noreturn]] void fail(const std::string& what) const { throw ValidationError(path_, what); }

  Node field(std::string_view key) const {
    if (!value_.is_object()) fail("expected an object");
    auto it = value_.find(key);
    if (it == value_.end()) {
      throw ValidationError(path_, fmt::format("missing required field '{}'", key));
    }
    return Node(*it, fmt::format("{}/{}", path_, key));
  }

  std::optional<Node> optional_field(std::string_view key) const {
    if (!value_.is_object()) fail("expected an object");
    auto it = value_.find(key);
    if (it == value_.end() || it->is_null()) return std::nullopt;
    return Node(*it, fmt::format("{}/{}", path_, key));
  }

  std::size_t size() const {
    if (!value_.is_array()) fail("expected an array");
    return value_.size();
  }

  Node at(std::size_t i) const { return Node(value_.at(i), fmt::format("{}/{}", path_, i)); }

  const std::string& string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get_ref<const std::string&>();
  }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    return value_.get<double>();
  }

  int integer() const {
    if (!value_.is_number_integer()) fail("expected an integer");
    const auto v = value_.get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      fail("integer out of range");
    }
    return static_cast<int>(v);
  }

 private:
  const json& value_;
  std::string path_;
};

json parse_json_text(std::string_view text) {
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF) {
    throw ValidationError("", "byte order mark is not allowed");
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("", fmt::format("malformed JSON: {}", e.what()));
  }
}

BBox read_box(const Node& node) {
  if (node.size() != 4) node.fail("box must have exactly 4 numbers");
  return {node.at(0).number(), node.at(1).number(), node.at(2).number(), node.at(3).number()};
}

std::optional<Pose> read_pose(const std::optional<Node>& node) {
  if (!node) return std::nullopt;
  Pose pose;
  const std::size_t n = node->size();
  pose.keypoints.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Node kp = node->at(i);
    if (kp.size() != 3) kp.fail("keypoint must be [x, y, confidence]");
    pose.keypoints.push_back({kp.at(0).number(), kp.at(1).number(), kp.at(2).number()});
  }
  return pose;
}

std::vector<std::string> read_names(const Node& node) {
  std::vector<std::string> names;
  const std::size_t n = node.size();
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(node.at(i).string());
  return names;
}

PartCategory read_category(const Node& node) {
  auto c = parse_part_category(node.string());
  if (!c) node.fail(fmt::format("unknown part category '{}'", node.string()));
  return *c;
}

ActionId read_action(const Node& node, const Vocabulary& vocab) {
  auto a = vocab.find_action(node.string());
  if (!a) node.fail(fmt::format("unknown video action '{}'", node.string()));
  return *a;
}

StateId read_state(const Node& node, const Vocabulary& vocab) {
  auto s = vocab.find_state(node.string());
  if (!s) node.fail(fmt::format("unknown part state '{}'", node.string()));
  return *s;
}

double read_confidence(const Node& node) {
  // Confidence is optional so that a ground-truth file can be scored as a prediction.
  auto c = node.optional_field("confidence");
  return c ? c->number() : 1.0;
}

std::vector<Node> elements(const Node& array) {
  std::vector<Node> out;
  const std::size_t n = array.size();
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(array.at(i));
  return out;
}

Vocabulary read_vocab(const Node& node) {
  Vocabulary vocab;
  vocab.video_actions = read_names(node.field("video_actions"));
  vocab.part_states = read_names(node.field("part_states"));
  return vocab;
}

ordered_json box_json(const BBox& b) { return ordered_json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

ordered_json pose_json(const std::optional<Pose>& pose) {
  if (!pose) return nullptr;
  ordered_json arr = ordered_json::array();
  for (const Keypoint& kp : pose->keypoints) arr.push_back({kp.x, kp.y, kp.confidence});
  return arr;
}

ordered_json vocab_json(const Vocabulary& vocab) {
  ordered_json v;
  v["video_actions"] = vocab.video_actions;
  v["part_states"] = vocab.part_states;
  return v;
}

const std::string& name_or_throw(const std::vector<std::string>& names, int id, std::string_view what) {
  if (id < 0 || static_cast<std::size_t>(id) >= names.size()) {
    throw ValidationError("", fmt::format("{} id {} outside vocabulary", what, id));
  }
  return names[static_cast<std::size_t>(id)];
}

}  // namespace

Dataset parse_dataset_string(std::string_view json_text) {
  const json doc = parse_json_text(json_text);
  const Node root(doc, "");
  Dataset dataset;
  dataset.vocab = read_vocab(root.field("vocab"));
  validate(dataset.vocab);
  const Vocabulary& vocab = dataset.vocab;

  for (const Node& vn : elements(root.field("videos"))) {
    VideoAnnotation video;
    video.video_id = vn.field("video_id").string();
    video.action = read_action(vn.field("action"), vocab);
    video.fps = vn.field("fps").number();
    video.duration_s = vn.field("duration_s").number();
    for (const Node& fn : elements(vn.field("frames"))) {
      FrameAnnotation frame;
      frame.frame_idx = fn.field("frame_idx").integer();
      for (const Node& pn : elements(fn.field("persons"))) {
        PersonAnnotation person;
        person.box = read_box(pn.field("box"));
        person.pose = read_pose(pn.optional_field("pose"));
        if (auto parts = pn.optional_field("parts")) {
          for (const Node& kn : elements(*parts)) {
            person.parts.push_back({read_category(kn.field("category")), read_box(kn.field("box")),
                                    read_state(kn.field("state"), vocab)});
          }
        }
        frame.persons.push_back(std::move(person));
      }
      video.frames.push_back(std::move(frame));
    }
    dataset.videos.push_back(std::move(video));
  }
  validate(dataset);
  return dataset;
}

Dataset parse_dataset(const std::filesystem::path& path) {
  return parse_dataset_string(read_text_file(path));
}

PredictionSet parse_predictions_string(std::string_view json_text, const Vocabulary& vocab) {
  const json doc = parse_json_text(json_text);
  const Node root(doc, "");
  PredictionSet predictions;

  for (const Node& vn : elements(root.field("videos"))) {
    VideoPrediction video;
    video.video_id = vn.field("video_id").string();
    video.action = read_action(vn.field("action"), vocab);
    video.confidence = read_confidence(vn);
    for (const Node& fn : elements(vn.field("frames"))) {
      FramePrediction frame;
      frame.frame_idx = fn.field("frame_idx").integer();
      const Node persons = fn.field("persons");
      if (persons.size() > kMaxPersonsPerFrame) {
        persons.fail(fmt::format("{} persons predicted, at most {} allowed", persons.size(),
                                 kMaxPersonsPerFrame));
      }
      for (const Node& pn : elements(persons)) {
        PersonPrediction person;
        person.box = read_box(pn.field("box"));
        person.confidence = read_confidence(pn);
        person.pose = read_pose(pn.optional_field("pose"));
        if (auto parts = pn.optional_field("parts")) {
          for (const Node& kn : elements(*parts)) {
            person.parts.push_back({read_category(kn.field("category")), read_box(kn.field("box")),
                                    read_state(kn.field("state"), vocab), read_confidence(kn)});
          }
        }
        frame.persons.push_back(std::move(person));
      }
      video.frames.push_back(std::move(frame));
    }
    predictions.videos.push_back(std::move(video));
  }
  validate(predictions, vocab);
  return predictions;
}

PredictionSet parse_predictions(const std::filesystem::path& path, const Vocabulary& vocab) {
  return parse_predictions_string(read_text_file(path), vocab);
}

std::string serialize_dataset(const Dataset& dataset) {
  const Vocabulary& vocab = dataset.vocab;
  ordered_json doc;
  doc["vocab"] = vocab_json(vocab);
  ordered_json videos = ordered_json::array();
  for (const VideoAnnotation& video : dataset.videos) {
    ordered_json v;
    v["video_id"] = video.video_id;
    v["action"] = name_or_throw(vocab.video_actions, video.action, "action");
    v["fps"] = video.fps;
    v["duration_s"] = video.duration_s;
    ordered_json frames = ordered_json::array();
    for (const FrameAnnotation& frame : video.frames) {
      ordered_json f;
      f["frame_idx"] = frame.frame_idx;
      ordered_json persons = ordered_json::array();
      for (const PersonAnnotation& person : frame.persons) {
        ordered_json p;
        p["box"] = box_json(person.box);
        p["pose"] = pose_json(person.pose);
        ordered_json parts = ordered_json::array();
        for (const PartAnnotation& part : person.parts) {
          ordered_json k;
          k["category"] = std::string(to_string(part.category));
          k["box"] = box_json(part.box);
          k["state"] = name_or_throw(vocab.part_states, part.state, "state");
          parts.push_back(std::move(k));
        }
        p["parts"] = std::move(parts);
        persons.push_back(std::move(p));
      }
      f["persons"] = std::move(persons);
      frames.push_back(std::move(f));
    }
    v["frames"] = std::move(frames);
    videos.push_back(std::move(v));
  }
  doc["videos"] = std::move(videos);
  return doc.dump(2) + "\n";
}

std::string serialize_predictions(const PredictionSet& predictions, const Vocabulary& vocab) {
  ordered_json doc;
  ordered_json videos = ordered_json::array();
  for (const VideoPrediction& video : predictions.videos) {
    ordered_json v;
    v["video_id"] = video.video_id;
    v["action"] = name_or_throw(vocab.video_actions, video.action, "action");
    v["confidence"] = video.confidence;
    ordered_json frames = ordered_json::array();
    for (const FramePrediction& frame : video.frames) {
      ordered_json f;
      f["frame_idx"] = frame.frame_idx;
      ordered_json persons = ordered_json::array();
      for (const PersonPrediction& person : frame.persons) {
        ordered_json p;
        p["box"] = box_json(person.box);
        p["confidence"] = person.confidence;
        p["pose"] = pose_json(person.pose);
        ordered_json parts = ordered_json::array();
        for (const PartPrediction& part : person.parts) {
          ordered_json k;
          k["category"] = std::string(to_string(part.category));
          k["box"] = box_json(part.box);
          k["state"] = name_or_throw(vocab.part_states, part.state, "state");
          k["confidence"] = part.confidence;
          parts.push_back(std::move(k));
        }
        p["parts"] = std::move(parts);
        persons.push_back(std::move(p));
      }
      f["persons"] = std::move(persons);
      frames.push_back(std::move(f));
    }
    v["frames"] = std::move(frames);
    videos.push_back(std::move(v));
  }
  doc["videos"] = std::move(videos);
  return doc.dump(2) + "\n";
}

}  // namespace pap
