#include "obbkit/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "obbkit/adr.hpp"
#include "obbkit/config.hpp"
#include "obbkit/cost.hpp"
#include "obbkit/errors.hpp"
#include "obbkit/io.hpp"
#include "obbkit/matching.hpp"
#include "obbkit/nms.hpp"
#include "obbkit/ocd.hpp"
#include "obbkit/scene_io.hpp"

namespace obbkit::cli {

namespace {

using nlohmann::json;

// Raised after parsing when option combinations are inconsistent.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  bool degrees = false;
};

struct Context {
  RunConfig cfg;
  bool degrees = false;
  std::ostream& out;
  std::ostream& err;

  void emit(const std::string& path, const std::string& contents) const {
    if (path.empty()) {
      out << contents;
    } else {
      io::write_file_atomic(path, contents);
    }
  }

  SceneFile scene(const std::string& path) const {
    SceneFile s = load_scene(path, degrees);
    for (const auto& w : s.warnings) err << "warning: " << path << ": " << w << "\n";
    return s;
  }
};

std::size_t class_count(const SceneFile& s) {
  int top = 0;
  for (const auto& d : s.detections) top = std::max(top, d.class_id);
  for (const auto& g : s.gts) top = std::max(top, g.class_id);
  return static_cast<std::size_t>(top) + 1;
}

void require_gts(const SceneFile& s, const std::string& path) {
  if (s.gts.empty()) throw DataError(path + ": gts: missing or empty");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// gen-scene --------------------------------------------------------------

struct GenSceneArgs {
  std::size_t count = 0;
  double spacing = 64.0;
  bool random_scores = false;
  int classes = 1;
  bool emit_gts = false;
  std::string out;
};

void run_gen_scene(const Context& ctx, const GenSceneArgs& a) {
  std::mt19937_64 rng(ctx.cfg.seed);
  SceneFile scene;
  scene.detections = nms::gen_scene(a.count, a.spacing, rng);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::uniform_int_distribution<int> cls(0, a.classes - 1);
  for (auto& d : scene.detections) {
    if (a.random_scores) d.score = score(rng);
    if (a.classes > 1) d.class_id = cls(rng);
  }
  if (a.emit_gts) {
    for (const auto& d : scene.detections) scene.gts.push_back({d.box, d.class_id});
  }
  ctx.emit(a.out, dump(scene_to_json(scene)));
}

// nms ----------------------------------------------------------------------

struct NmsArgs {
  std::string scene;
  double iou = 0.0;
  double conf = 0.0;
  CLI::Option* iou_opt = nullptr;
  CLI::Option* conf_opt = nullptr;
  bool class_agnostic = false;
  std::string out;
};

nms::NmsConfig nms_config(const Context& ctx, const NmsArgs& a) {
  nms::NmsConfig c = ctx.cfg.nms;
  if (a.iou_opt->count() > 0) c.iou_threshold = a.iou;
  if (a.conf_opt->count() > 0) c.conf_threshold = a.conf;
  if (a.class_agnostic) c.class_aware = false;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("nms: ") + e.what());
  }
  return c;
}

void run_nms(const Context& ctx, const NmsArgs& a) {
  const SceneFile scene = ctx.scene(a.scene);
  const auto kept = nms::rotated_nms_indices(scene.detections, nms_config(ctx, a));
  SceneFile result;
  for (const std::size_t i : kept) result.detections.push_back(scene.detections[i]);
  json j = scene_to_json(result);
  j["kept"] = kept;
  ctx.emit(a.out, dump(j));
}

// nms-bench ----------------------------------------------------------------

struct BenchArgs {
  std::vector<std::size_t> counts{1000, 2000, 4000, 8000, 16000};
  int repeats = 9;
  double spacing = 64.0;
  NmsArgs nms;
};

void run_nms_bench(const Context& ctx, const BenchArgs& a) {
  std::vector<std::size_t> counts = a.counts;
  std::sort(counts.begin(), counts.end());
  const auto rows =
      nms::benchmark_nms(counts, a.repeats, nms_config(ctx, a.nms), ctx.cfg.seed, a.spacing);
  std::ostringstream csv;
  csv << "count,median_us,p10_us,p90_us\n";
  for (const auto& r : rows) {
    csv << r.count << ',' << io::format_real(r.median_us) << ','
        << io::format_real(r.p10_us) << ',' << io::format_real(r.p90_us) << '\n';
  }
  ctx.emit(a.nms.out, csv.str());
}

// conf-sweep ---------------------------------------------------------------

struct SweepArgs {
  std::string scene;
  std::vector<double> thresholds{0.005, 0.01, 0.025, 0.05, 0.1, 0.15, 0.2, 0.25};
  std::string out;
};

void run_conf_sweep(const Context& ctx, const SweepArgs& a) {
  const SceneFile scene = ctx.scene(a.scene);
  std::vector<double> ts = a.thresholds;
  std::sort(ts.begin(), ts.end());
  std::ostringstream csv;
  csv << "threshold,kept\n";
  for (const auto& r : nms::confidence_sweep(scene.detections, ts)) {
    csv << io::format_real(r.threshold) << ',' << r.kept << '\n';
  }
  ctx.emit(a.out, csv.str());
}

// cost / match -------------------------------------------------------------

struct CostArgs {
  std::string scene;
  std::string matrix;
  std::string out;
};

CostMatrix scene_cost(const Context& ctx, const std::string& path) {
  const SceneFile scene = ctx.scene(path);
  require_gts(scene, path);
  const auto preds = to_predictions(scene.detections, class_count(scene));
  return combined_cost_matrix(preds, scene.gts, ctx.cfg.weights, ctx.cfg.cost);
}

json matrix_json(const CostMatrix& c) {
  json rows = json::array();
  for (std::size_t r = 0; r < c.rows(); ++r) {
    json row = json::array();
    for (std::size_t k = 0; k < c.cols(); ++k) row.push_back(c(r, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

CostMatrix load_matrix(const std::string& path) {
  const json j = io::read_json(path);
  const json* m = &j;
  if (j.is_object()) {
    const auto it = j.find("cost");
    if (it == j.end()) throw DataError(path + ": cost: missing field");
    m = &*it;
  }
  if (!m->is_array() || m->empty()) throw DataError(path + ": cost: expected a non-empty array");
  const std::size_t cols = (*m)[0].is_array() ? (*m)[0].size() : 0;
  if (cols == 0) throw DataError(path + ": cost[0]: expected a non-empty array");
  CostMatrix c(m->size(), cols);
  for (std::size_t r = 0; r < m->size(); ++r) {
    const json& row = (*m)[r];
    const std::string where = path + ": cost[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != cols) {
      throw DataError(where + ": expected " + std::to_string(cols) + " entries");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!row[k].is_number() || !std::isfinite(row[k].get<double>())) {
        throw DataError(where + "[" + std::to_string(k) + "]: expected a finite number");
      }
      c(r, k) = row[k].get<double>();
    }
  }
  return c;
}

void run_cost(const Context& ctx, const CostArgs& a) {
  const CostMatrix c = scene_cost(ctx, a.scene);
  ctx.emit(a.out, dump(json{{"rows", c.rows()}, {"cols", c.cols()}, {"cost", matrix_json(c)}}));
}

void run_match(const Context& ctx, const CostArgs& a) {
  if (a.scene.empty() == a.matrix.empty()) {
    throw UsageError("match: give exactly one of --scene or --matrix");
  }
  const CostMatrix c = a.scene.empty() ? load_matrix(a.matrix) : scene_cost(ctx, a.scene);
  const Assignment as = hungarian_assign(c);
  json pairs = json::array();
  for (const auto& p : as.pairs) pairs.push_back({{"gt", p.gt}, {"pred", p.pred}});
  ctx.emit(a.out, dump(json{{"pairs", std::move(pairs)}, {"total_cost", as.total_cost}}));
}

// instability --------------------------------------------------------------

struct InstabilityArgs {
  std::string records;
  std::string mode = "indicator";
  std::string out;
};

struct ImageRecord {
  std::string id;
  LayerMatchRecord rec;
};

std::vector<ImageRecord> load_records(const std::string& path) {
  const json j = io::read_json(path);
  if (!j.is_object() || !j.contains("images") || !j["images"].is_array()) {
    throw DataError(path + ": images: expected an array");
  }
  const json& images = j["images"];
  if (images.empty()) throw DataError(path + ": images: empty");
  std::vector<ImageRecord> out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = path + ": images[" + std::to_string(i) + "]";
    const json& img = images[i];
    if (!img.is_object()) throw DataError(where + ": expected an object");
    ImageRecord r;
    if (const auto it = img.find("image_id"); it == img.end()) {
      r.id = std::to_string(i);
    } else if (it->is_string()) {
      r.id = it->get<std::string>();
    } else if (it->is_number_integer()) {
      r.id = std::to_string(it->get<long long>());
    } else {
      throw DataError(where + ".image_id: expected a string or integer");
    }
    const auto lit = img.find("layers");
    if (lit == img.end() || !lit->is_array()) throw DataError(where + ".layers: expected an array");
    for (std::size_t l = 0; l < lit->size(); ++l) {
      const json& layer = (*lit)[l];
      const std::string lw = where + ".layers[" + std::to_string(l) + "]";
      if (!layer.is_array()) throw DataError(lw + ": expected an array");
      std::vector<long long> idx;
      for (const auto& v : layer) {
        if (!v.is_number_integer()) throw DataError(lw + ": expected integers");
        idx.push_back(v.get<long long>());
      }
      r.rec.layers.push_back(std::move(idx));
    }
    if (const auto it = img.find("num_queries"); it != img.end()) {
      if (!it->is_number_integer()) throw DataError(where + ".num_queries: expected an integer");
      r.rec.num_queries = it->get<long long>();
    }
    try {
      r.rec.validate();
    } catch (const std::invalid_argument& e) {
      throw DataError(where + ": " + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

void run_instability(const Context& ctx, const InstabilityArgs& a) {
  const InstabilityMode mode =
      a.mode == "xor" ? InstabilityMode::kBitwiseXor : InstabilityMode::kIndicator;
  const auto images = load_records(a.records);
  std::ostringstream csv;
  csv << "image_id,IS\n";
  double sum = 0.0;
  for (const auto& img : images) {
    const double is = instability(img.rec, mode);
    sum += is;
    csv << img.id << ',' << io::format_real(is) << '\n';
  }
  csv << "mean," << io::format_real(sum / static_cast<double>(images.size())) << '\n';
  ctx.emit(a.out, csv.str());
}

// adr-sim ------------------------------------------------------------------

struct AdrArgs {
  std::string box;
  std::string trace;
  int layers = 6;
  double logit_scale = 0.0;
  std::string out;
};

OrientedBox parse_box_arg(const std::string& text, bool degrees) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError("--box: '" + part + "' is not a number");
    }
  }
  if (v.size() != 5) throw UsageError("--box expects cx,cy,w,h,theta");
  const double theta = degrees ? v[4] * kPi / 180.0 : v[4];
  try {
    return OrientedBox(v[0], v[1], v[2], v[3], normalize_angle(theta));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--box: ") + e.what());
  }
}

json logits_json(const adr::Logits& l) {
  json j = json::array();
  for (const auto& ch : l) j.push_back(ch);
  return j;
}

struct Trace {
  OrientedBox box;
  std::vector<adr::Logits> deltas;
};

Trace load_trace(const std::string& path, const adr::WeightingConfig& cfg, bool degrees) {
  const json j = io::read_json(path);
  if (!j.is_object()) throw DataError(path + ": expected an object");
  if (!j.contains("box")) throw DataError(path + ": box: missing field");
  SceneFile one;
  try {
    json wrapped{{"detections", json::array()}, {"gts", json::array()}};
    json b = j["box"];
    if (b.is_object()) b["class_id"] = 0;
    wrapped["gts"].push_back(b);
    one = parse_scene(wrapped, degrees);
  } catch (const DataError& e) {
    std::string msg = e.what();
    const std::string prefix = "gts[0]";
    if (msg.rfind(prefix, 0) == 0) msg = "box" + msg.substr(prefix.size());
    throw DataError(path + ": " + msg);
  }
  Trace t{one.gts.front().box, {}};
  const auto dit = j.find("deltas");
  if (dit == j.end() || !dit->is_array()) throw DataError(path + ": deltas: expected an array");
  for (std::size_t l = 0; l < dit->size(); ++l) {
    const json& layer = (*dit)[l];
    const std::string where = path + ": deltas[" + std::to_string(l) + "]";
    if (!layer.is_array() || layer.size() != adr::kChannels) {
      throw DataError(where + ": expected " + std::to_string(adr::kChannels) + " channels");
    }
    adr::Logits lg;
    for (std::size_t c = 0; c < adr::kChannels; ++c) {
      const json& ch = layer[c];
      if (!ch.is_array() || ch.size() != cfg.size()) {
        throw DataError(where + "[" + std::to_string(c) + "]: expected " +
                        std::to_string(cfg.size()) + " logits");
      }
      for (const auto& v : ch) {
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
          throw DataError(where + "[" + std::to_string(c) + "]: expected finite numbers");
        }
        lg[c].push_back(v.get<double>());
      }
    }
    t.deltas.push_back(std::move(lg));
  }
  return t;
}

void run_adr_sim(const Context& ctx, const AdrArgs& a) {
  const adr::WeightingConfig& wc = ctx.cfg.adr;
  if (a.box.empty() == a.trace.empty()) {
    throw UsageError("adr-sim: give exactly one of --box or --trace");
  }
  Trace t{OrientedBox(0.0, 0.0, 1.0, 1.0, 0.0), {}};
  if (!a.trace.empty()) {
    t = load_trace(a.trace, wc, ctx.degrees);
  } else {
    if (a.layers < 1) throw UsageError("--layers must be >= 1");
    if (!(a.logit_scale >= 0.0)) throw UsageError("--logit-scale must be >= 0");
    t.box = parse_box_arg(a.box, ctx.degrees);
    std::mt19937_64 rng(ctx.cfg.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int l = 0; l < a.layers; ++l) {
      adr::Logits lg = adr::zero_logits(wc);
      if (a.logit_scale > 0.0) {
        for (auto& ch : lg) {
          for (auto& v : ch) v = a.logit_scale * noise(rng);
        }
      }
      t.deltas.push_back(std::move(lg));
    }
  }

  const adr::LayerTrace trace = adr::simulate_layers(t.box, t.deltas, wc);
  json layers = json::array();
  for (std::size_t l = 0; l < trace.boxes.size(); ++l) {
    layers.push_back({{"layer", l + 1},
                      {"box", box_to_json(trace.boxes[l])},
                      {"clamped", static_cast<bool>(trace.clamped[l])}});
  }
  json deltas = json::array();
  for (const auto& d : t.deltas) deltas.push_back(logits_json(d));
  ctx.emit(a.out, dump(json{{"bins", wc.bins},
                            {"a", wc.a},
                            {"c", wc.c},
                            {"box", box_to_json(t.box)},
                            {"layers", std::move(layers)},
                            {"deltas", std::move(deltas)}}));
}

// ocd-gen ------------------------------------------------------------------

struct OcdArgs {
  std::string scene;
  std::string mode;
  int total_queries = 0;
  CLI::Option* total_opt = nullptr;
  std::string out;
};

void run_ocd_gen(const Context& ctx, const OcdArgs& a) {
  ocd::NoiseConfig nc = ctx.cfg.noise;
  if (!a.mode.empty()) nc.mode = ocd::noise_mode_from_string(a.mode);
  if (a.total_opt->count() > 0) nc.total_queries = a.total_queries;
  try {
    nc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("ocd-gen: ") + e.what());
  }
  const SceneFile scene = ctx.scene(a.scene);
  require_gts(scene, a.scene);
  std::vector<OrientedBox> gts;
  for (const auto& g : scene.gts) gts.push_back(g.box);

  const ocd::DenoiseGroup groups = ocd::generate_denoise_groups(gts, nc);
  json entries = json::array();
  for (std::size_t i = 0; i < groups.positives.size(); ++i) {
    for (const auto* e : {&groups.positives[i], &groups.negatives[i]}) {
      entries.push_back({{"gt_index", e->gt_index},
                         {"group", e->group},
                         {"polarity", e == &groups.positives[i] ? "positive" : "negative"},
                         {"box", box_to_json(e->box)}});
    }
  }
  ctx.emit(a.out, dump(json{{"mode", ocd::to_string(nc.mode)},
                            {"seed", nc.seed},
                            {"num_groups", groups.num_groups},
                            {"entries", std::move(entries)}}));
}

// cost-compare -------------------------------------------------------------

void run_cost_compare(const Context& ctx, const CostArgs& a) {
  const SceneFile scene = ctx.scene(a.scene);
  require_gts(scene, a.scene);
  std::ostringstream csv;
  csv << "pred,gt,l1,kld,hausdorff,chamfer\n";
  for (std::size_t p = 0; p < scene.detections.size(); ++p) {
    for (std::size_t g = 0; g < scene.gts.size(); ++g) {
      const OrientedBox& pb = scene.detections[p].box;
      const OrientedBox& gb = scene.gts[g].box;
      csv << p << ',' << g << ',' << io::format_real(l1_cost(pb, gb)) << ','
          << io::format_real(kld_cost(pb, gb, ctx.cfg.cost.kld_tau)) << ','
          << io::format_real(hausdorff_cost(pb, gb)) << ','
          << io::format_real(chamfer_cost(pb, gb, ctx.cfg.cost.samples_per_edge)) << '\n';
    }
  }
  ctx.emit(a.out, csv.str());
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Oriented box geometry, matching costs, denoising and rotated NMS tools",
               "obbkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  Globals g;
  app.add_option("--config", g.config, "JSON run configuration");
  g.seed_opt = app.add_option("--seed", g.seed, "random seed (overrides the config)");
  app.add_flag("--degrees", g.degrees, "read input angles in degrees");

  const auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  GenSceneArgs gen;
  CLI::App* gen_cmd = sub("gen-scene", "generate a grid of non-overlapping boxes");
  gen_cmd->add_option("--count", gen.count, "number of boxes")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--spacing", gen.spacing, "grid pitch")->check(CLI::PositiveNumber);
  gen_cmd->add_flag("--random-scores", gen.random_scores, "draw scores from U(0, 1)");
  gen_cmd->add_option("--classes", gen.classes, "number of classes")->check(CLI::Range(1, 1000000));
  gen_cmd->add_flag("--emit-gts", gen.emit_gts, "copy the detections into gts");
  gen_cmd->add_option("--out", gen.out, "output path (default stdout)");

  NmsArgs nmsa;
  CLI::App* nms_cmd = sub("nms", "run rotated NMS on a scene");
  nms_cmd->add_option("--scene", nmsa.scene, "scene JSON")->required();
  nmsa.iou_opt = nms_cmd->add_option("--iou", nmsa.iou, "IoU threshold");
  nmsa.conf_opt = nms_cmd->add_option("--conf", nmsa.conf, "confidence threshold");
  nms_cmd->add_flag("--class-agnostic", nmsa.class_agnostic, "suppress across classes");
  nms_cmd->add_option("--out", nmsa.out, "output path (default stdout)");

  BenchArgs bench;
  CLI::App* bench_cmd = sub("nms-bench", "time rotated NMS over scene sizes (CSV)");
  bench_cmd->add_option("--counts", bench.counts, "scene sizes")->delimiter(',');
  bench_cmd->add_option("--repeats", bench.repeats, "timed runs per size")->check(CLI::Range(5, 1000000));
  bench_cmd->add_option("--spacing", bench.spacing, "grid pitch")->check(CLI::PositiveNumber);
  bench.nms.iou_opt = bench_cmd->add_option("--iou", bench.nms.iou, "IoU threshold");
  bench.nms.conf_opt = bench_cmd->add_option("--conf", bench.nms.conf, "confidence threshold");
  bench_cmd->add_option("--out", bench.nms.out, "output path (default stdout)");

  SweepArgs sweep;
  CLI::App* sweep_cmd = sub("conf-sweep", "boxes surviving each confidence threshold (CSV)");
  sweep_cmd->add_option("--scene", sweep.scene, "scene JSON")->required();
  sweep_cmd->add_option("--thresholds", sweep.thresholds, "thresholds")->delimiter(',');
  sweep_cmd->add_option("--out", sweep.out, "output path (default stdout)");

  CostArgs costa;
  CLI::App* cost_cmd = sub("cost", "combined matching cost matrix of a scene (JSON)");
  cost_cmd->add_option("--scene", costa.scene, "scene JSON with gts")->required();
  cost_cmd->add_option("--out", costa.out, "output path (default stdout)");

  CostArgs matcha;
  CLI::App* match_cmd = sub("match", "optimal prediction/gt assignment (JSON)");
  match_cmd->add_option("--scene", matcha.scene, "scene JSON with gts");
  match_cmd->add_option("--matrix", matcha.matrix, "cost matrix JSON, rows are predictions");
  match_cmd->add_option("--out", matcha.out, "output path (default stdout)");

  InstabilityArgs insta;
  CLI::App* inst_cmd = sub("instability", "per-image matching instability (CSV)");
  inst_cmd->add_option("--records", insta.records, "per-layer match records JSON")->required();
  inst_cmd->add_option("--mode", insta.mode, "indicator or xor")
      ->check(CLI::IsMember({"indicator", "xor"}));
  inst_cmd->add_option("--out", insta.out, "output path (default stdout)");

  AdrArgs adra;
  CLI::App* adr_cmd = sub("adr-sim", "replay angle distribution refinement (JSON)");
  adr_cmd->add_option("--box", adra.box, "initial box cx,cy,w,h,theta");
  adr_cmd->add_option("--trace", adra.trace, "JSON with box and per-layer delta logits");
  adr_cmd->add_option("--layers", adra.layers, "layers with random deltas");
  adr_cmd->add_option("--logit-scale", adra.logit_scale, "std-dev of random deltas (0: none)");
  adr_cmd->add_option("--out", adra.out, "output path (default stdout)");

  OcdArgs ocda;
  CLI::App* ocd_cmd = sub("ocd-gen", "denoising query groups for the scene gts (JSON)");
  ocd_cmd->add_option("--scene", ocda.scene, "scene JSON with gts")->required();
  ocd_cmd->add_option("--mode", ocda.mode, "box, angle, geometric or probability")
      ->check(CLI::IsMember({"box", "angle", "geometric", "probability"}));
  ocda.total_opt = ocd_cmd->add_option("--total-queries", ocda.total_queries, "denoising queries");
  ocd_cmd->add_option("--out", ocda.out, "output path (default stdout)");

  CostArgs cmpa;
  CLI::App* cmp_cmd = sub("cost-compare", "per-pair l1, kld, hausdorff and chamfer costs (CSV)");
  cmp_cmd->add_option("--scene", cmpa.scene, "scene JSON with gts")->required();
  cmp_cmd->add_option("--out", cmpa.out, "output path (default stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg = g.config.empty() ? RunConfig{} : load_config(g.config);
    if (g.seed_opt->count() > 0) cfg.seed = g.seed;
    cfg.noise.seed = cfg.seed;
    const Context ctx{cfg, g.degrees, out, err};

    if (app.got_subcommand(gen_cmd)) run_gen_scene(ctx, gen);
    else if (app.got_subcommand(nms_cmd)) run_nms(ctx, nmsa);
    else if (app.got_subcommand(bench_cmd)) run_nms_bench(ctx, bench);
    else if (app.got_subcommand(sweep_cmd)) run_conf_sweep(ctx, sweep);
    else if (app.got_subcommand(cost_cmd)) run_cost(ctx, costa);
    else if (app.got_subcommand(match_cmd)) run_match(ctx, matcha);
    else if (app.got_subcommand(inst_cmd)) run_instability(ctx, insta);
    else if (app.got_subcommand(adr_cmd)) run_adr_sim(ctx, adra);
    else if (app.got_subcommand(ocd_cmd)) run_ocd_gen(ctx, ocda);
    else if (app.got_subcommand(cmp_cmd)) run_cost_compare(ctx, cmpa);
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace obbkit::cli
