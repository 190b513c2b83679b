#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "obbkit/geometry.hpp"

namespace obbkit::nms {

struct Detection {
  OrientedBox box;
  double score = 0.0;
  int class_id = 0;
};

struct NmsConfig {
  double iou_threshold = 0.1;
  double conf_threshold = 0.05;
  bool class_aware = true;

  // Throws std::invalid_argument unless iou_threshold is in (0, 1) and
  // conf_threshold in [0, 1).
  void validate() const;
};

// Detections with score >= tau, in input order.
std::vector<Detection> confidence_filter(std::span<const Detection> dets, double tau);

// Greedy rotated NMS. Returns indices into `dets` of the kept detections,
// highest score first (ties: lower index first). A candidate is dropped when
// its rotated IoU with an already kept box (of the same class when
// class_aware) exceeds iou_threshold.
std::vector<std::size_t> rotated_nms_indices(std::span<const Detection> dets,
                                             const NmsConfig& cfg);

std::vector<Detection> rotated_nms(std::span<const Detection> dets, const NmsConfig& cfg);

// `count` boxes on a square grid with pitch `spacing`, random sizes in
// [0.2, 0.6] * spacing and random angles, class 0, score 1. The circumscribed
// circles never meet, so every pairwise IoU is zero.
std::vector<Detection> gen_scene(std::size_t count, double spacing, std::mt19937_64& rng);

struct BenchmarkRow {
  std::size_t count = 0;
  double median_us = 0.0;
  double p10_us = 0.0;
  double p90_us = 0.0;
  std::vector<double> samples_us;
};

// Linear-interpolated percentile (q in [0, 1]) of an unsorted sample.
double percentile(std::vector<double> samples, double q);

// For each count: one scene from gen_scene, one untimed warm-up run, then
// `repeats` timed runs of rotated_nms on the calling thread. A count of zero
// times an empty scene. Throws std::invalid_argument for repeats < 5 or
// counts not ascending.
std::vector<BenchmarkRow> benchmark_nms(std::span<const std::size_t> counts,
                                        int repeats, const NmsConfig& cfg,
                                        std::uint64_t seed, double spacing = 64.0);

struct SweepRow {
  double threshold = 0.0;
  std::size_t kept = 0;
};

// Number of detections surviving the confidence filter at each threshold.
std::vector<SweepRow> confidence_sweep(std::span<const Detection> dets,
                                       std::span<const double> thresholds);

}  // namespace obbkit::nms
