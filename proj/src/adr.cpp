#include "obbkit/adr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace obbkit::adr {

void WeightingConfig::validate() const {
  if (bins < 2 || bins % 2 != 0) {
    throw std::invalid_argument("bins must be even and >= 2");
  }
  if (!(std::isfinite(a) && a > 0.0) || !(std::isfinite(c) && c > 0.0)) {
    throw std::invalid_argument("weighting a and c must be finite and > 0");
  }
}

double weighting_fn(const WeightingConfig& cfg, int n) {
  if (n < 0 || n > cfg.bins) {
    throw std::out_of_range("bin index " + std::to_string(n) + " outside [0, " +
                            std::to_string(cfg.bins) + "]");
  }
  const int half = cfg.bins / 2;
  if (n == half) return 0.0;
  const double sign = n > half ? 1.0 : -1.0;
  if (n == 0 || n == cfg.bins) return sign * 2.0 * cfg.a;
  const double exponent = 2.0 * std::abs(n - half) / static_cast<double>(cfg.bins - 2);
  return sign * cfg.c * (std::pow(1.0 + cfg.a / cfg.c, exponent) - 1.0);
}

std::vector<double> weighting_table(const WeightingConfig& cfg) {
  cfg.validate();
  std::vector<double> out(cfg.size());
  for (int n = 0; n <= cfg.bins; ++n) out[static_cast<std::size_t>(n)] = weighting_fn(cfg, n);
  return out;
}

OffsetEncoding encode_offsets(const OrientedBox& b) {
  OffsetEncoding enc;
  enc.rect = box_to_aabb(b);
  const auto verts = box_to_vertices(b).points;
  const double tol = 1e-9 * (enc.rect.width + enc.rect.height);

  // top: minimal y, ties to maximal x; right: maximal x, ties to maximal y
  const double y_top = std::min_element(verts.begin(), verts.end(),
                                        [](auto& p, auto& q) { return p.y < q.y; })->y;
  const double x_right = std::max_element(verts.begin(), verts.end(),
                                          [](auto& p, auto& q) { return p.x < q.x; })->x;
  double top_x = -std::numeric_limits<double>::infinity();
  double right_y = -std::numeric_limits<double>::infinity();
  for (const Point2& p : verts) {
    if (p.y <= y_top + tol) top_x = std::max(top_x, p.x);
    if (p.x >= x_right - tol) right_y = std::max(right_y, p.y);
  }
  enc.epsilon = std::clamp(enc.rect.x_max() - top_x, 0.0, enc.rect.width);
  enc.eta = std::clamp(enc.rect.y_max() - right_y, 0.0, enc.rect.height);
  return enc;
}

namespace {

struct Candidate {
  double area;
  OrientedBox box;
};

std::optional<Candidate> enclosing_along(const std::array<Point2, 4>& pts,
                                         Point2 dir, double min_extent) {
  const double len = std::hypot(dir.x, dir.y);
  if (!(len > 0.0)) return std::nullopt;
  const Point2 u{dir.x / len, dir.y / len};
  const Point2 n{-u.y, u.x};
  double lo_u = std::numeric_limits<double>::infinity(), hi_u = -lo_u;
  double lo_n = lo_u, hi_n = -lo_u;
  for (const Point2& p : pts) {
    const double su = p.x * u.x + p.y * u.y;
    const double sn = p.x * n.x + p.y * n.y;
    lo_u = std::min(lo_u, su);
    hi_u = std::max(hi_u, su);
    lo_n = std::min(lo_n, sn);
    hi_n = std::max(hi_n, sn);
  }
  const double mid_u = (lo_u + hi_u) / 2.0;
  const double mid_n = (lo_n + hi_n) / 2.0;
  const double ext_u = std::max(hi_u - lo_u, min_extent);
  const double ext_n = std::max(hi_n - lo_n, min_extent);
  return Candidate{ext_u * ext_n,
                   OrientedBox(mid_u * u.x + mid_n * n.x, mid_u * u.y + mid_n * n.y,
                               ext_u, ext_n, std::atan2(u.y, u.x))};
}

}  // namespace

DecodeResult decode_box(const RectEdges& e, double epsilon, double eta,
                        std::optional<double> theta_hint) {
  if (!std::isfinite(e.x_min) || !std::isfinite(e.x_max) || !std::isfinite(e.y_min) ||
      !std::isfinite(e.y_max) || !(e.x_min < e.x_max) || !(e.y_min < e.y_max)) {
    throw std::invalid_argument("decode_box: rectangle edges do not span an area");
  }
  if (!std::isfinite(epsilon) || !std::isfinite(eta)) {
    throw std::invalid_argument("decode_box: non-finite offsets");
  }
  const double width = e.x_max - e.x_min;
  const double height = e.y_max - e.y_min;
  const double eps = std::clamp(epsilon, 0.0, width);
  const double et = std::clamp(eta, 0.0, height);
  const bool clamped = eps != epsilon || et != eta;

  const std::array<Point2, 4> pts{{
      {e.x_max - eps, e.y_min},
      {e.x_max, e.y_max - et},
      {e.x_min + eps, e.y_max},
      {e.x_min, e.y_min + et},
  }};
  const double min_extent = 1e-9 * (width + height);
  const auto first = enclosing_along(pts, {pts[1].x - pts[0].x, pts[1].y - pts[0].y}, min_extent);
  const auto second = enclosing_along(pts, {pts[2].x - pts[1].x, pts[2].y - pts[1].y}, min_extent);
  // At least one of the two edges has positive length for any clamped input.
  const Candidate& best =
      !first ? *second : (!second ? *first : (second->area < first->area ? *second : *first));

  const OrientedBox labeled =
      theta_hint ? relabel_toward(best.box, *theta_hint) : canonical_labeling(best.box);
  return {labeled, clamped};
}

Logits zero_logits(const WeightingConfig& cfg) {
  Logits out;
  for (auto& v : out) v.assign(cfg.size(), 0.0);
  return out;
}

AdrState AdrState::from_box(const OrientedBox& b, const WeightingConfig& cfg) {
  cfg.validate();
  const OffsetEncoding enc = encode_offsets(b);
  AdrState s;
  s.rect0 = enc.rect;
  s.edges0 = {enc.rect.width / 2.0, enc.rect.height / 2.0, enc.rect.width / 2.0,
              enc.rect.height / 2.0};
  s.offsets0 = {enc.epsilon, enc.eta};
  s.logits = zero_logits(cfg);
  s.layer = 0;
  s.theta_ref = b.theta();
  return s;
}

double expected_offset(std::span<const double> logits,
                       std::span<const double> weights) {
  if (logits.size() != weights.size() || logits.empty()) {
    throw std::invalid_argument("expected_offset: size mismatch");
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - peak);
    norm += p[i];
  }
  // Mirror pairs are added first so that symmetric distributions cancel
  // exactly against the antisymmetric weights.
  const std::size_t last = logits.size() - 1;
  double acc = 0.0;
  for (std::size_t i = 0; i < last - i; ++i) {
    acc += weights[i] * p[i] + weights[last - i] * p[last - i];
  }
  if (last % 2 == 0) acc += weights[last / 2] * p[last / 2];
  return acc / norm;
}

RefineOutput refine_step(const AdrState& state, const Logits& delta,
                         const WeightingConfig& cfg) {
  const std::vector<double> table = weighting_table(cfg);
  RefineOutput out{state, OrientedBox(state.rect0.cx, state.rect0.cy, 1.0, 1.0, 0.0)};
  for (std::size_t ch = 0; ch < kChannels; ++ch) {
    if (delta[ch].size() != table.size() || state.logits[ch].size() != table.size()) {
      throw std::invalid_argument("refine_step: logits for channel " +
                                  std::to_string(ch) + " must have " +
                                  std::to_string(table.size()) + " entries");
    }
    auto& lg = out.state.logits[ch];
    for (std::size_t n = 0; n < lg.size(); ++n) {
      lg[n] += delta[ch][n];
      if (!std::isfinite(lg[n])) {
        throw std::domain_error("refine_step: non-finite logits");
      }
    }
  }

  const AxisRect& r0 = state.rect0;
  const std::array<double, 4> edge_scale{r0.width, r0.height, r0.width, r0.height};
  for (std::size_t i = 0; i < 4; ++i) {
    out.edges[i] = state.edges0[i] + edge_scale[i] * expected_offset(out.state.logits[i], table);
  }
  out.offsets[0] = state.offsets0[0] + r0.width * expected_offset(out.state.logits[kEpsilon], table);
  out.offsets[1] = state.offsets0[1] + r0.height * expected_offset(out.state.logits[kEta], table);

  const RectEdges edges{r0.cx - out.edges[kAlpha], r0.cx + out.edges[kGamma],
                        r0.cy - out.edges[kBeta], r0.cy + out.edges[kDelta]};
  if (!(edges.x_min < edges.x_max) || !(edges.y_min < edges.y_max)) {
    throw std::domain_error("refine_step: refined external rectangle collapsed");
  }
  const DecodeResult decoded = decode_box(edges, out.offsets[0], out.offsets[1], state.theta_ref);
  out.box = decoded.box;
  out.clamped = decoded.clamped;
  out.state.layer = state.layer + 1;
  return out;
}

LayerTrace simulate_layers(const OrientedBox& b0, std::span<const Logits> layers,
                           const WeightingConfig& cfg) {
  if (layers.empty()) {
    throw std::invalid_argument("simulate_layers: need at least one layer");
  }
  LayerTrace trace;
  AdrState state = AdrState::from_box(b0, cfg);
  for (const Logits& delta : layers) {
    RefineOutput step = refine_step(state, delta, cfg);
    trace.boxes.push_back(step.box);
    trace.clamped.push_back(step.clamped);
    state = std::move(step.state);
  }
  return trace;
}

}  // namespace obbkit::adr
