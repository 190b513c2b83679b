#include "obbkit/ocd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace obbkit::ocd {

namespace {

constexpr double kMinExtent = 1e-6;

double uniform(Rng& rng, double lo, double hi) {
  if (!(hi > lo)) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double symmetric(Rng& rng, double bound) {
  return bound > 0.0 ? uniform(rng, -bound, bound) : 0.0;
}

bool band_ok(double lo, double hi) {
  return std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && lo <= hi;
}

// Orders one axis of corner coordinates and enforces the size floor.
std::pair<double, double> settle_extent(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  if (hi - lo < kMinExtent) {
    const double mid = (lo + hi) / 2.0;
    lo = mid - kMinExtent / 2.0;
    hi = mid + kMinExtent / 2.0;
  }
  return {lo, hi};
}

OrientedBox from_corners(double x1, double y1, double x2, double y2, double theta) {
  const auto [xl, xh] = settle_extent(x1, x2);
  const auto [yl, yh] = settle_extent(y1, y2);
  return OrientedBox((xl + xh) / 2.0, (yl + yh) / 2.0, xh - xl, yh - yl, theta);
}

OrientedBox perturb_corners(const OrientedBox& gt, Rng& rng, bool positive,
                            const NoiseConfig& cfg) {
  const double x1 = gt.cx() - gt.w() / 2.0;
  const double x2 = gt.cx() + gt.w() / 2.0;
  const double y1 = gt.cy() - gt.h() / 2.0;
  const double y2 = gt.cy() + gt.h() / 2.0;
  const auto draw = [&](double extent) {
    const double lo = cfg.lambda1 * extent / 2.0;
    const double hi = cfg.lambda2 * extent / 2.0;
    return positive ? symmetric(rng, lo) : sample_annulus(rng, lo, hi);
  };
  const double dx1 = draw(gt.w());
  const double dy1 = draw(gt.h());
  const double dx2 = draw(gt.w());
  const double dy2 = draw(gt.h());
  if (dx1 == 0.0 && dy1 == 0.0 && dx2 == 0.0 && dy2 == 0.0) return gt;
  return from_corners(x1 + dx1, y1 + dy1, x2 + dx2, y2 + dy2, gt.theta());
}

double angle_offset(const OrientedBox& gt, Rng& rng, bool positive,
                    const NoiseConfig& cfg) {
  const double lo = cfg.lambda3 * gt.theta() / 18.0;
  const double hi = cfg.lambda4 * gt.theta() / 18.0;
  return positive ? symmetric(rng, lo) : sample_annulus(rng, lo, hi);
}

OrientedBox rotate_by(const OrientedBox& b, double d) {
  return OrientedBox(b.cx(), b.cy(), b.w(), b.h(), b.theta() + d);
}

}  // namespace

std::string to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::kBox: return "box";
    case NoiseMode::kAngle: return "angle";
    case NoiseMode::kGeometric: return "geometric";
    case NoiseMode::kProbability: return "probability";
  }
  return "box";
}

NoiseMode noise_mode_from_string(const std::string& name) {
  if (name == "box") return NoiseMode::kBox;
  if (name == "angle") return NoiseMode::kAngle;
  if (name == "geometric") return NoiseMode::kGeometric;
  if (name == "probability") return NoiseMode::kProbability;
  throw std::invalid_argument("unknown noise mode '" + name + "'");
}

void NoiseConfig::validate() const {
  if (!band_ok(lambda1, lambda2)) {
    throw std::invalid_argument("box noise needs 0 <= lambda1 <= lambda2");
  }
  if (!band_ok(lambda3, lambda4)) {
    throw std::invalid_argument("angle noise needs 0 <= lambda3 <= lambda4");
  }
  if (!band_ok(lambda5, lambda6) || lambda6 > 1.0) {
    throw std::invalid_argument("probability noise needs 0 <= lambda5 <= lambda6 <= 1");
  }
  if (total_queries < 2 || total_queries % 2 != 0) {
    throw std::invalid_argument("total_queries must be even and >= 2");
  }
}

double sample_annulus(Rng& rng, double lo, double hi) {
  const double width = hi - lo;
  if (!(width > 0.0)) {
    return std::bernoulli_distribution(0.5)(rng) ? lo : -lo;
  }
  const double t = uniform(rng, 0.0, 2.0 * width);
  return t < width ? -hi + t : lo + (t - width);
}

NoisePair box_noise_pair(const OrientedBox& gt, const NoiseConfig& cfg, Rng& rng) {
  OrientedBox pos = perturb_corners(gt, rng, true, cfg);
  OrientedBox neg = perturb_corners(gt, rng, false, cfg);
  return {pos, neg};
}

NoisePair angle_noise_pair(const OrientedBox& gt, const NoiseConfig& cfg, Rng& rng) {
  const double dpos = angle_offset(gt, rng, true, cfg);
  const double dneg = angle_offset(gt, rng, false, cfg);
  return {rotate_by(gt, dpos), rotate_by(gt, dneg)};
}

NoisePair geometric_noise_pair(const OrientedBox& gt, const NoiseConfig& cfg, Rng& rng) {
  const NoisePair boxed = box_noise_pair(gt, cfg, rng);
  const double dpos = angle_offset(gt, rng, true, cfg);
  const double dneg = angle_offset(gt, rng, false, cfg);
  return {rotate_by(boxed.positive, dpos), rotate_by(boxed.negative, dneg)};
}

OrientedBox mix_with_identity(const OrientedBox& gt, double lambda) {
  GaussianBox g = box_to_gaussian(gt, /*normalize=*/true);
  g.cov.xx = (1.0 - lambda) * g.cov.xx + lambda;
  g.cov.xy = (1.0 - lambda) * g.cov.xy;
  g.cov.yy = (1.0 - lambda) * g.cov.yy + lambda;
  const OrientedBox shape = gaussian_to_box(g, std::max(gt.w(), gt.h()), gt.theta());
  return OrientedBox(gt.cx(), gt.cy(), shape.w(), shape.h(), shape.theta());
}

NoisePair probability_noise_pair(const OrientedBox& gt, const NoiseConfig& cfg, Rng& rng) {
  const double lpos = uniform(rng, 0.0, cfg.lambda5);
  const double lneg = uniform(rng, cfg.lambda5, cfg.lambda6);
  return {mix_with_identity(gt, lpos), mix_with_identity(gt, lneg)};
}

NoisePair noise_pair(const OrientedBox& gt, const NoiseConfig& cfg, Rng& rng) {
  switch (cfg.mode) {
    case NoiseMode::kBox: return box_noise_pair(gt, cfg, rng);
    case NoiseMode::kAngle: return angle_noise_pair(gt, cfg, rng);
    case NoiseMode::kGeometric: return geometric_noise_pair(gt, cfg, rng);
    case NoiseMode::kProbability: return probability_noise_pair(gt, cfg, rng);
  }
  return box_noise_pair(gt, cfg, rng);
}

std::size_t denoise_group_count(std::size_t num_gts, int total_queries) {
  if (num_gts == 0) return 0;
  const std::size_t per_group = 2 * num_gts;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::max(total_queries, 0)) / per_group);
}

Rng substream(std::uint64_t seed, std::size_t group, std::size_t gt_index) {
  const auto lo32 = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  const auto hi32 = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo32(seed), hi32(seed), lo32(group), hi32(group), lo32(gt_index),
                    hi32(gt_index)};
  return Rng(seq);
}

DenoiseGroup generate_denoise_groups(std::span<const OrientedBox> gts,
                                     const NoiseConfig& cfg) {
  cfg.validate();
  DenoiseGroup out;
  out.num_groups = denoise_group_count(gts.size(), cfg.total_queries);
  out.positives.reserve(out.num_groups * gts.size());
  out.negatives.reserve(out.num_groups * gts.size());
  for (std::size_t g = 0; g < out.num_groups; ++g) {
    for (std::size_t m = 0; m < gts.size(); ++m) {
      Rng rng = substream(cfg.seed, g, m);
      const NoisePair pair = noise_pair(gts[m], cfg, rng);
      out.positives.push_back({m, g, pair.positive});
      out.negatives.push_back({m, g, pair.negative});
    }
  }
  return out;
}

}  // namespace obbkit::ocd
