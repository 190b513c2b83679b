#include "obbkit/nms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace obbkit::nms {

void NmsConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw std::invalid_argument("iou_threshold must lie in (0, 1)");
  }
  if (!(conf_threshold >= 0.0 && conf_threshold < 1.0)) {
    throw std::invalid_argument("conf_threshold must lie in [0, 1)");
  }
}

std::vector<Detection> confidence_filter(std::span<const Detection> dets, double tau) {
  std::vector<Detection> out;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(out),
               [tau](const Detection& d) { return d.score >= tau; });
  return out;
}

std::vector<std::size_t> rotated_nms_indices(std::span<const Detection> dets,
                                             const NmsConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> order;
  order.reserve(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].score >= cfg.conf_threshold) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });

  std::vector<AxisRect> bounds(dets.size());
  for (const std::size_t i : order) bounds[i] = box_to_aabb(dets[i].box);

  std::vector<std::size_t> kept;
  for (const std::size_t i : order) {
    const AxisRect& bi = bounds[i];
    bool suppressed = false;
    for (const std::size_t j : kept) {
      if (cfg.class_aware && dets[j].class_id != dets[i].class_id) continue;
      const AxisRect& bj = bounds[j];
      // Boxes whose bounding rectangles do not overlap have IoU 0.
      if (bi.x_max() <= bj.x_min() || bj.x_max() <= bi.x_min() ||
          bi.y_max() <= bj.y_min() || bj.y_max() <= bi.y_min()) {
        continue;
      }
      if (rotated_iou(dets[i].box, dets[j].box) > cfg.iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(i);
  }
  return kept;
}

std::vector<Detection> rotated_nms(std::span<const Detection> dets, const NmsConfig& cfg) {
  std::vector<Detection> out;
  for (const std::size_t i : rotated_nms_indices(dets, cfg)) out.push_back(dets[i]);
  return out;
}

std::vector<Detection> gen_scene(std::size_t count, double spacing, std::mt19937_64& rng) {
  if (count == 0) throw std::invalid_argument("gen_scene: count must be >= 1");
  if (!(std::isfinite(spacing) && spacing > 0.0)) {
    throw std::invalid_argument("gen_scene: spacing must be > 0");
  }
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));
  std::uniform_real_distribution<double> size(0.2 * spacing, 0.6 * spacing);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  std::vector<Detection> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double cx = (static_cast<double>(i % cols) + 0.5) * spacing;
    const double cy = (static_cast<double>(i / cols) + 0.5) * spacing;
    const double w = size(rng);
    const double h = size(rng);
    const double theta = angle(rng);
    out.push_back({OrientedBox(cx, cy, w, h, theta), 1.0, 0});
  }
  return out;
}

double percentile(std::vector<double> samples, double q) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(samples.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return samples[lo] + frac * (samples[hi] - samples[lo]);
}

std::vector<BenchmarkRow> benchmark_nms(std::span<const std::size_t> counts,
                                        int repeats, const NmsConfig& cfg,
                                        std::uint64_t seed, double spacing) {
  if (repeats < 5) throw std::invalid_argument("benchmark_nms: repeats must be >= 5");
  if (!std::is_sorted(counts.begin(), counts.end())) {
    throw std::invalid_argument("benchmark_nms: counts must be ascending");
  }
  cfg.validate();

  std::vector<BenchmarkRow> rows;
  volatile std::size_t sink = 0;
  for (const std::size_t count : counts) {
    std::mt19937_64 rng(seed + count);
    const std::vector<Detection> scene =
        count == 0 ? std::vector<Detection>{} : gen_scene(count, spacing, rng);

    sink = sink + rotated_nms_indices(scene, cfg).size();  // warm-up

    BenchmarkRow row;
    row.count = count;
    for (int r = 0; r < repeats; ++r) {
      const auto start = std::chrono::steady_clock::now();
      const auto kept = rotated_nms_indices(scene, cfg);
      const auto stop = std::chrono::steady_clock::now();
      sink = sink + kept.size();
      row.samples_us.push_back(
          std::chrono::duration<double, std::micro>(stop - start).count());
    }
    row.median_us = percentile(row.samples_us, 0.5);
    row.p10_us = percentile(row.samples_us, 0.1);
    row.p90_us = percentile(row.samples_us, 0.9);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> confidence_sweep(std::span<const Detection> dets,
                                       std::span<const double> thresholds) {
  std::vector<SweepRow> out;
  out.reserve(thresholds.size());
  for (const double t : thresholds) {
    out.push_back({t, confidence_filter(dets, t).size()});
  }
  return out;
}

}  // namespace obbkit::nms
