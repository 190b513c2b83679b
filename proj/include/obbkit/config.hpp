#pragma once

#include <cstdint>
#include <filesystem>

#include "json.hpp"

#include "obbkit/adr.hpp"
#include "obbkit/cost.hpp"
#include "obbkit/nms.hpp"
#include "obbkit/ocd.hpp"

namespace obbkit {

struct RunConfig {
  CostWeights weights;
  CostParams cost;
  ocd::NoiseConfig noise;
  adr::WeightingConfig adr;
  nms::NmsConfig nms;
  std::uint64_t seed = 0;

  // Throws DataError naming the first sub-config that is out of range.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);

// Keys missing from `j` keep their defaults. Unknown keys, wrong types and
// out-of-range values raise DataError with the key path.
RunConfig config_from_json(const nlohmann::json& j);

RunConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const RunConfig& cfg);

}  // namespace obbkit
