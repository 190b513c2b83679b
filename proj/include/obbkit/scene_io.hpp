#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "obbkit/cost.hpp"
#include "obbkit/nms.hpp"

namespace obbkit {

struct SceneFile {
  std::vector<nms::Detection> detections;
  std::vector<GroundTruth> gts;
  // One line per angle that had to be wrapped into [0, pi).
  std::vector<std::string> warnings;
};

// Parses the scene schema
//   {"detections":[{"cx","cy","w","h","theta","score","class_id"}],
//    "gts":[{"cx","cy","w","h","theta","class_id"}]}
// with "gts" optional. Angles are read in degrees when `degrees` is set.
// Throws DataError naming the record and field, e.g. "detections[3].w".
SceneFile parse_scene(const nlohmann::json& j, bool degrees = false);
SceneFile load_scene(const std::filesystem::path& path, bool degrees = false);

nlohmann::json scene_to_json(const SceneFile& scene);
nlohmann::json box_to_json(const OrientedBox& b);

// Score vector with the detection's score at its class id and zeros elsewhere,
// padded to `num_classes` entries.
std::vector<Prediction> to_predictions(const std::vector<nms::Detection>& dets,
                                       std::size_t num_classes);

}  // namespace obbkit
