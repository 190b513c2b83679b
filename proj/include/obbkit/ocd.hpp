#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "obbkit/geometry.hpp"

namespace obbkit::ocd {

using Rng = std::mt19937_64;

enum class NoiseMode { kBox, kAngle, kGeometric, kProbability };

std::string to_string(NoiseMode mode);
// Throws std::invalid_argument for an unknown name.
NoiseMode noise_mode_from_string(const std::string& name);

struct NoiseConfig {
  NoiseMode mode = NoiseMode::kBox;
  double lambda1 = 1.0;   // box noise, positive band
  double lambda2 = 2.0;   // box noise, negative band
  double lambda3 = 9.0;   // angle noise, positive band
  double lambda4 = 18.0;  // angle noise, negative band
  double lambda5 = 0.3;   // probability noise, positive band
  double lambda6 = 0.6;   // probability noise, negative band
  int total_queries = 200;
  std::uint64_t seed = 0;

  // Bands must be ordered (lambda1 <= lambda2 and so on; equal bounds give a
  // zero-width band), non-negative and finite, lambda6 <= 1, and
  // total_queries even and >= 2. Throws std::invalid_argument otherwise.
  void validate() const;
};

struct NoisePair {
  OrientedBox positive;
  OrientedBox negative;
};

// Uniform draw from [-hi, -lo) U [lo, hi). With lo == hi it returns +/-lo.
double sample_annulus(Rng& rng, double lo, double hi);

// Perturbs the corner coordinates x1, x2 = cx -/+ w/2 and y1, y2 = cy -/+ h/2
// independently; theta is untouched. Collapsed extents are swapped and
// floored at 1e-6.
NoisePair box_noise_pair(const OrientedBox& gt, const NoiseConfig& cfg, Rng& rng);

// Angle offsets scale with theta: |d| < lambda3 * theta / 18 for the positive,
// lambda3 * theta / 18 <= |d| < lambda4 * theta / 18 for the negative. The
// result is wrapped into [0, pi).
NoisePair angle_noise_pair(const OrientedBox& gt, const NoiseConfig& cfg, Rng& rng);

// Box noise followed by angle noise of the same polarity.
NoisePair geometric_noise_pair(const OrientedBox& gt, const NoiseConfig& cfg, Rng& rng);

// Mixes the normalized covariance with the identity,
// (1 - l) Sigma + l I, with l in [0, lambda5) for the positive and
// [lambda5, lambda6) for the negative, then rebuilds the box at scale
// max(w, h). The center stays fixed.
NoisePair probability_noise_pair(const OrientedBox& gt, const NoiseConfig& cfg, Rng& rng);

// Probability noise with a fixed mixing weight.
OrientedBox mix_with_identity(const OrientedBox& gt, double lambda);

NoisePair noise_pair(const OrientedBox& gt, const NoiseConfig& cfg, Rng& rng);

struct DenoiseEntry {
  std::size_t gt_index = 0;
  std::size_t group = 0;
  OrientedBox box;
};

struct DenoiseGroup {
  std::vector<DenoiseEntry> positives;
  std::vector<DenoiseEntry> negatives;
  std::size_t num_groups = 0;
};

// Number of repeats of the full gt set: max(1, total_queries / (2 M)).
std::size_t denoise_group_count(std::size_t num_gts, int total_queries);

// Independent stream for one (group, gt) cell, derived from the seed.
Rng substream(std::uint64_t seed, std::size_t group, std::size_t gt_index);

// One positive/negative pair per gt per group, group-major. Each pair draws
// from substream(cfg.seed, group, gt), so cells can be generated in any
// order with the same result.
DenoiseGroup generate_denoise_groups(std::span<const OrientedBox> gts,
                                     const NoiseConfig& cfg);

}  // namespace obbkit::ocd
