#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "obbkit/geometry.hpp"

namespace obbkit::adr {

// Bins are indexed 0..bins, so every distribution has bins + 1 entries.
struct WeightingConfig {
  int bins = 32;
  double a = 0.5;
  double c = 0.1;

  // Throws std::invalid_argument unless bins is even and >= 2 and a, c are
  // finite and positive.
  void validate() const;
  std::size_t size() const { return static_cast<std::size_t>(bins) + 1; }
};

// Offset carried by bin n:
//   sgn(n - N/2) * 2a                                   for n in {0, N}
//   sgn(n - N/2) * c((1 + a/c)^(2|n - N/2| / (N - 2)) - 1)  otherwise.
// Throws std::out_of_range for n outside [0, N].
double weighting_fn(const WeightingConfig& cfg, int n);

// All weights, index n -> A(n).
std::vector<double> weighting_table(const WeightingConfig& cfg);

// Vertex offsets of a box inside its external rectangle. epsilon runs from
// the top vertex to the top-right corner, eta from the rightmost vertex to
// the bottom-right corner.
struct OffsetEncoding {
  AxisRect rect;
  double epsilon = 0.0;
  double eta = 0.0;
};

OffsetEncoding encode_offsets(const OrientedBox& b);

struct RectEdges {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
};

struct DecodeResult {
  OrientedBox box;
  // Offsets fell outside [0, width] x [0, height] and were clamped.
  bool clamped = false;
};

// Builds the parallelogram (x_max - eps, y_min), (x_max, y_max - eta),
// (x_min + eps, y_max), (x_min, y_min + eta) and returns the smaller of the
// two enclosing rectangles aligned with its edge directions. Consistent
// offsets give back the rectangle exactly. The result is labeled with
// theta in [0, pi/2) unless `theta_hint` picks the other labeling.
// Throws std::invalid_argument when the edges do not span a positive area.
DecodeResult decode_box(const RectEdges& edges, double epsilon, double eta,
                        std::optional<double> theta_hint = std::nullopt);

enum Channel : std::size_t { kAlpha = 0, kBeta, kGamma, kDelta, kEpsilon, kEta };
inline constexpr std::size_t kChannels = 6;

// One logit vector per channel (alpha, beta, gamma, delta, epsilon, eta).
using Logits = std::array<std::vector<double>, kChannels>;

Logits zero_logits(const WeightingConfig& cfg);

struct AdrState {
  AxisRect rect0;
  // Initial distances from the center to the left, top, right, bottom edges.
  std::array<double, 4> edges0{};
  // Initial (epsilon, eta).
  std::array<double, 2> offsets0{};
  Logits logits;
  int layer = 0;
  // Angle of the box the state was built from; keeps decoded boxes on the
  // same (w, h) labeling across layers.
  double theta_ref = 0.0;

  // Uniform (all-zero) logits.
  static AdrState from_box(const OrientedBox& b, const WeightingConfig& cfg);
};

// Sum over n of A(n) * softmax(logits)(n).
double expected_offset(std::span<const double> logits,
                       std::span<const double> weights);

struct RefineOutput {
  AdrState state;
  OrientedBox box;
  bool clamped = false;
  // Refined distances alpha, beta, gamma, delta.
  std::array<double, 4> edges{};
  // Refined epsilon, eta.
  std::array<double, 2> offsets{};
};

// Adds `delta` to the running logits, turns them into distributions and
// moves the edges and offsets away from their initial values by
// (Wr, Hr, Wr, Hr) and (Wr, Hr) times the expected weight. Throws
// std::invalid_argument for a size mismatch, std::domain_error for
// non-finite logits or a collapsed rectangle.
RefineOutput refine_step(const AdrState& state, const Logits& delta,
                         const WeightingConfig& cfg);

struct LayerTrace {
  std::vector<OrientedBox> boxes;
  std::vector<bool> clamped;
};

LayerTrace simulate_layers(const OrientedBox& b0, std::span<const Logits> layers,
                           const WeightingConfig& cfg);

}  // namespace obbkit::adr
