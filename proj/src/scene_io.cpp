#include "obbkit/scene_io.hpp"

#include <algorithm>
#include <cmath>

#include "obbkit/errors.hpp"
#include "obbkit/io.hpp"

namespace obbkit {

namespace {

using nlohmann::json;

class RecordReader {
 public:
  RecordReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  double real(const char* key) {
    const json& v = field(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "must be finite");
    return x;
  }

  int integer(const char* key) {
    const json& v = field(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    const long long x = v.get<long long>();
    if (x < 0 || x > 1'000'000) fail(key, "must lie in [0, 1000000]");
    return static_cast<int>(x);
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw DataError(where_ + (key.empty() ? "" : "." + key) + ": " + msg);
  }

 private:
  const json& field(const char* key) const {
    const auto it = j_.find(key);
    if (it == j_.end()) fail(key, "missing field");
    return *it;
  }

  const json& j_;
  std::string where_;
};

OrientedBox read_box(RecordReader& r, bool degrees, const std::string& where,
                     std::vector<std::string>& warnings) {
  const double cx = r.real("cx");
  const double cy = r.real("cy");
  const double w = r.real("w");
  const double h = r.real("h");
  double theta = r.real("theta");
  if (!(w > 0.0)) r.fail("w", "must be > 0");
  if (!(h > 0.0)) r.fail("h", "must be > 0");
  if (degrees) theta *= kPi / 180.0;
  const double wrapped = normalize_angle(theta);
  if (!(theta >= 0.0 && theta < kPi)) {
    warnings.push_back(where + ".theta: " + io::format_real(theta) +
                       " normalized to " + io::format_real(wrapped));
  }
  return OrientedBox(cx, cy, w, h, wrapped);
}

}  // namespace

SceneFile parse_scene(const json& j, bool degrees) {
  if (!j.is_object()) throw DataError("scene: expected an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "detections" && key != "gts") throw DataError(key + ": unknown key");
  }
  const auto dit = j.find("detections");
  if (dit == j.end()) throw DataError("detections: missing field");
  if (!dit->is_array()) throw DataError("detections: expected an array");

  SceneFile scene;
  for (std::size_t i = 0; i < dit->size(); ++i) {
    const std::string where = "detections[" + std::to_string(i) + "]";
    RecordReader r((*dit)[i], where);
    const OrientedBox box = read_box(r, degrees, where, scene.warnings);
    const double score = r.real("score");
    if (score < 0.0 || score > 1.0) r.fail("score", "must lie in [0, 1]");
    scene.detections.push_back({box, score, r.integer("class_id")});
  }

  if (const auto git = j.find("gts"); git != j.end()) {
    if (!git->is_array()) throw DataError("gts: expected an array");
    for (std::size_t i = 0; i < git->size(); ++i) {
      const std::string where = "gts[" + std::to_string(i) + "]";
      RecordReader r((*git)[i], where);
      const OrientedBox box = read_box(r, degrees, where, scene.warnings);
      scene.gts.push_back({box, r.integer("class_id")});
    }
  }
  return scene;
}

SceneFile load_scene(const std::filesystem::path& path, bool degrees) {
  const json j = io::read_json(path);
  try {
    return parse_scene(j, degrees);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

json box_to_json(const OrientedBox& b) {
  return json{{"cx", b.cx()}, {"cy", b.cy()}, {"w", b.w()}, {"h", b.h()}, {"theta", b.theta()}};
}

json scene_to_json(const SceneFile& scene) {
  json dets = json::array();
  for (const auto& d : scene.detections) {
    json rec = box_to_json(d.box);
    rec["score"] = d.score;
    rec["class_id"] = d.class_id;
    dets.push_back(std::move(rec));
  }
  json out{{"detections", std::move(dets)}};
  if (!scene.gts.empty()) {
    json gts = json::array();
    for (const auto& g : scene.gts) {
      json rec = box_to_json(g.box);
      rec["class_id"] = g.class_id;
      gts.push_back(std::move(rec));
    }
    out["gts"] = std::move(gts);
  }
  return out;
}

std::vector<Prediction> to_predictions(const std::vector<nms::Detection>& dets,
                                       std::size_t num_classes) {
  std::vector<Prediction> out;
  out.reserve(dets.size());
  for (const auto& d : dets) {
    const auto cls = static_cast<std::size_t>(d.class_id);
    Prediction p{d.box, std::vector<double>(std::max(num_classes, cls + 1), 0.0)};
    p.class_scores[cls] = d.score;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace obbkit
