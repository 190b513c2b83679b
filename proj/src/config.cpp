#include "obbkit/config.hpp"

#include <set>
#include <string>

#include "obbkit/errors.hpp"
#include "obbkit/io.hpp"

namespace obbkit {

namespace {

using nlohmann::json;

// Reads known keys of one JSON object and rejects the rest.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw DataError("config: " + path_ + ": expected an object");
  }

  template <typename T>
  void read(const std::string& key, T& dst) {
    known_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    const bool ok = [&] {
      if constexpr (std::is_same_v<T, bool>) return it->is_boolean();
      else if constexpr (std::is_integral_v<T>) return it->is_number_integer();
      else if constexpr (std::is_floating_point_v<T>) return it->is_number();
      else return it->is_string();
    }();
    if (!ok) throw DataError("config: " + where(key) + ": wrong type");
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (std::is_unsigned_v<T> && it->is_number_integer() && it->template get<long long>() < 0 &&
          !it->is_number_unsigned()) {
        throw DataError("config: " + where(key) + ": must be non-negative");
      }
    }
    dst = it->template get<T>();
  }

  const json* child(const std::string& key) {
    known_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!known_.count(key)) throw DataError("config: " + where(key) + ": unknown key");
    }
  }

  std::string where(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> known_;
};

template <typename F>
void check(const std::string& section, F&& validate) {
  try {
    validate();
  } catch (const std::invalid_argument& e) {
    throw DataError("config: " + section + ": " + e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  check("cost", [&] {
    weights.validate();
    cost.validate();
  });
  check("noise", [&] { noise.validate(); });
  check("adr", [&] { adr.validate(); });
  check("nms", [&] { nms.validate(); });
}

nlohmann::json to_json(const RunConfig& c) {
  return json{
      {"seed", c.seed},
      {"cost",
       {{"weight_kld", c.weights.kld},
        {"weight_cls", c.weights.cls},
        {"weight_chamfer", c.weights.chamfer},
        {"focal_alpha", c.cost.focal_alpha},
        {"focal_gamma", c.cost.focal_gamma},
        {"kld_tau", c.cost.kld_tau},
        {"samples_per_edge", c.cost.samples_per_edge}}},
      {"noise",
       {{"mode", ocd::to_string(c.noise.mode)},
        {"lambda1", c.noise.lambda1},
        {"lambda2", c.noise.lambda2},
        {"lambda3", c.noise.lambda3},
        {"lambda4", c.noise.lambda4},
        {"lambda5", c.noise.lambda5},
        {"lambda6", c.noise.lambda6},
        {"total_queries", c.noise.total_queries}}},
      {"adr", {{"bins", c.adr.bins}, {"a", c.adr.a}, {"c", c.adr.c}}},
      {"nms",
       {{"iou_threshold", c.nms.iou_threshold},
        {"conf_threshold", c.nms.conf_threshold},
        {"class_aware", c.nms.class_aware}}},
  };
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  ObjectReader top(j, "");
  top.read("seed", c.seed);
  if (const json* cost = top.child("cost")) {
    ObjectReader r(*cost, "cost");
    r.read("weight_kld", c.weights.kld);
    r.read("weight_cls", c.weights.cls);
    r.read("weight_chamfer", c.weights.chamfer);
    r.read("focal_alpha", c.cost.focal_alpha);
    r.read("focal_gamma", c.cost.focal_gamma);
    r.read("kld_tau", c.cost.kld_tau);
    r.read("samples_per_edge", c.cost.samples_per_edge);
    r.finish();
  }
  if (const json* noise = top.child("noise")) {
    ObjectReader r(*noise, "noise");
    std::string mode = ocd::to_string(c.noise.mode);
    r.read("mode", mode);
    try {
      c.noise.mode = ocd::noise_mode_from_string(mode);
    } catch (const std::invalid_argument& e) {
      throw DataError(std::string("config: noise.mode: ") + e.what());
    }
    r.read("lambda1", c.noise.lambda1);
    r.read("lambda2", c.noise.lambda2);
    r.read("lambda3", c.noise.lambda3);
    r.read("lambda4", c.noise.lambda4);
    r.read("lambda5", c.noise.lambda5);
    r.read("lambda6", c.noise.lambda6);
    r.read("total_queries", c.noise.total_queries);
    r.finish();
  }
  if (const json* adr = top.child("adr")) {
    ObjectReader r(*adr, "adr");
    r.read("bins", c.adr.bins);
    r.read("a", c.adr.a);
    r.read("c", c.adr.c);
    r.finish();
  }
  if (const json* nms = top.child("nms")) {
    ObjectReader r(*nms, "nms");
    r.read("iou_threshold", c.nms.iou_threshold);
    r.read("conf_threshold", c.nms.conf_threshold);
    r.read("class_aware", c.nms.class_aware);
    r.finish();
  }
  top.finish();
  c.noise.seed = c.seed;
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  const json j = io::read_json(path);
  try {
    return config_from_json(j);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_config(const std::filesystem::path& path, const RunConfig& cfg) {
  io::write_file_atomic(path, to_json(cfg).dump(2) + "\n");
}

}  // namespace obbkit
