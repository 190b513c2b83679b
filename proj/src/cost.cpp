#include "obbkit/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace obbkit {

namespace {

double squared_distance(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double nearest_squared(const Point2& p, std::span<const Point2> set) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point2& q : set) best = std::min(best, squared_distance(p, q));
  return best;
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void CostWeights::validate() const {
  if (!finite_nonneg(kld) || !finite_nonneg(cls) || !finite_nonneg(chamfer)) {
    throw std::invalid_argument("cost weights must be finite and non-negative");
  }
}

void CostParams::validate() const {
  if (!(focal_alpha >= 0.0 && focal_alpha <= 1.0)) {
    throw std::invalid_argument("focal_alpha must lie in [0, 1]");
  }
  if (!finite_nonneg(focal_gamma)) {
    throw std::invalid_argument("focal_gamma must be finite and non-negative");
  }
  if (!(std::isfinite(kld_tau) && kld_tau >= 1.0)) {
    throw std::invalid_argument("kld_tau must be finite and >= 1");
  }
  if (samples_per_edge < 0) {
    throw std::invalid_argument("samples_per_edge must be >= 0");
  }
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

bool CostMatrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

double l1_cost(const OrientedBox& pred, const OrientedBox& gt) {
  return std::abs(pred.cx() - gt.cx()) + std::abs(pred.cy() - gt.cy()) +
         std::abs(pred.w() - gt.w()) + std::abs(pred.h() - gt.h()) +
         std::abs(pred.theta() - gt.theta());
}

std::vector<Point2> box_point_set(const OrientedBox& b, int samples_per_edge) {
  const auto poly = box_polygon(b);
  std::vector<Point2> out(poly.begin(), poly.end());
  if (samples_per_edge <= 0) return out;
  out.reserve(4 + 4 * static_cast<std::size_t>(samples_per_edge));
  for (std::size_t e = 0; e < 4; ++e) {
    const Point2& p = poly[e];
    const Point2& q = poly[(e + 1) % 4];
    for (int j = 1; j <= samples_per_edge; ++j) {
      const double t = static_cast<double>(j) / (samples_per_edge + 1);
      out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

double chamfer_distance(std::span<const Point2> s, std::span<const Point2> t) {
  if (s.empty() || t.empty()) {
    throw std::invalid_argument("chamfer_distance: empty point set");
  }
  double forward = 0.0;
  for (const Point2& p : s) forward += nearest_squared(p, t);
  double backward = 0.0;
  for (const Point2& p : t) backward += nearest_squared(p, s);
  return forward / static_cast<double>(s.size()) +
         backward / static_cast<double>(t.size());
}

double hausdorff_distance(std::span<const Point2> s, std::span<const Point2> t) {
  if (s.empty() || t.empty()) {
    throw std::invalid_argument("hausdorff_distance: empty point set");
  }
  double worst = 0.0;
  for (const Point2& p : s) worst = std::max(worst, nearest_squared(p, t));
  for (const Point2& p : t) worst = std::max(worst, nearest_squared(p, s));
  return std::sqrt(worst);
}

double chamfer_cost(const OrientedBox& pred, const OrientedBox& gt,
                    int samples_per_edge) {
  const auto a = box_point_set(pred, samples_per_edge);
  const auto b = box_point_set(gt, samples_per_edge);
  return chamfer_distance(a, b);
}

double hausdorff_cost(const OrientedBox& pred, const OrientedBox& gt) {
  const auto a = box_point_set(pred);
  const auto b = box_point_set(gt);
  return hausdorff_distance(a, b);
}

double kld_divergence(const GaussianBox& p, const GaussianBox& q) {
  const double det_p = p.cov.det();
  const double det_q = q.cov.det();
  if (!(det_p > 0.0) || !(det_q > 0.0) || !std::isfinite(det_p) ||
      !std::isfinite(det_q)) {
    throw std::domain_error("kld_divergence: singular covariance");
  }
  // inverse of q's covariance
  const double ixx = q.cov.yy / det_q;
  const double ixy = -q.cov.xy / det_q;
  const double iyy = q.cov.xx / det_q;

  const double dx = q.mean.x - p.mean.x;
  const double dy = q.mean.y - p.mean.y;
  const double mahalanobis = dx * (ixx * dx + ixy * dy) + dy * (ixy * dx + iyy * dy);
  const double trace = ixx * p.cov.xx + 2.0 * ixy * p.cov.xy + iyy * p.cov.yy;
  const double value = 0.5 * (mahalanobis + trace + std::log(det_q / det_p)) - 1.0;
  // Exact zero divergences can round to tiny negatives.
  return std::max(0.0, value);
}

double kld_cost(const OrientedBox& pred, const OrientedBox& gt, double tau) {
  const double d = kld_divergence(box_to_gaussian(pred), box_to_gaussian(gt));
  return 1.0 - 1.0 / (tau + std::log1p(d));
}

double focal_cost(double p, double alpha, double gamma) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("focal_cost: probability must lie in (0, 1)");
  }
  const double pos = alpha * std::pow(1.0 - p, gamma) * -std::log(p);
  const double neg = (1.0 - alpha) * std::pow(p, gamma) * -std::log1p(-p);
  return pos - neg;
}

CostMatrix combined_cost_matrix(std::span<const Prediction> preds,
                                std::span<const GroundTruth> gts,
                                const CostWeights& w, const CostParams& params) {
  w.validate();
  params.validate();
  CostMatrix out(preds.size(), gts.size());
  if (out.empty()) return out;

  for (std::size_t k = 0; k < preds.size(); ++k) {
    const Prediction& pred = preds[k];
    for (std::size_t m = 0; m < gts.size(); ++m) {
      const GroundTruth& gt = gts[m];
      double p = 0.0;
      if (gt.class_id >= 0 &&
          static_cast<std::size_t>(gt.class_id) < pred.class_scores.size()) {
        p = pred.class_scores[static_cast<std::size_t>(gt.class_id)];
      }
      p = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
      out(k, m) = combine_costs(
          w, kld_cost(pred.box, gt.box, params.kld_tau),
          focal_cost(p, params.focal_alpha, params.focal_gamma),
          chamfer_cost(pred.box, gt.box, params.samples_per_edge));
    }
  }
  if (!out.all_finite()) {
    throw std::domain_error("combined_cost_matrix: non-finite cost entry");
  }
  return out;
}

}  // namespace obbkit
