#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "obbkit/geometry.hpp"

namespace obbkit {

struct CostWeights {
  double kld = 2.0;
  double cls = 2.0;
  double chamfer = 5.0;

  // Throws std::invalid_argument unless all weights are finite and >= 0.
  void validate() const;
};

// Knobs of the individual cost terms that are not weights.
struct CostParams {
  double focal_alpha = 0.25;
  double focal_gamma = 2.0;
  double kld_tau = 1.0;
  int samples_per_edge = 0;

  void validate() const;
};

// Dense row-major K x M matrix; rows are predictions, columns ground truths.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<const double> values() const { return values_; }
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct Prediction {
  OrientedBox box;
  std::vector<double> class_scores;
};

struct GroundTruth {
  OrientedBox box;
  int class_id = 0;
};

// Sum of absolute parameter differences. The angle term is the raw radian
// difference without wrapping.
double l1_cost(const OrientedBox& pred, const OrientedBox& gt);

// Corners of `b`, plus `samples_per_edge` evenly spaced interior points on
// each edge when positive.
std::vector<Point2> box_point_set(const OrientedBox& b, int samples_per_edge = 0);

// Mean squared nearest-neighbour distance from s to t plus the same from t
// to s.
double chamfer_distance(std::span<const Point2> s, std::span<const Point2> t);
double hausdorff_distance(std::span<const Point2> s, std::span<const Point2> t);

double chamfer_cost(const OrientedBox& pred, const OrientedBox& gt,
                    int samples_per_edge = 0);
double hausdorff_cost(const OrientedBox& pred, const OrientedBox& gt);

// KL(p || q) between two bivariate normals. Throws std::domain_error for a
// singular covariance.
double kld_divergence(const GaussianBox& p, const GaussianBox& q);

// 1 - 1 / (tau + ln(1 + KL(pred || gt))) on the unnormalized Gaussians.
double kld_cost(const OrientedBox& pred, const OrientedBox& gt, double tau = 1.0);

// alpha (1-p)^gamma (-ln p) - (1-alpha) p^gamma (-ln(1-p)). Throws
// std::domain_error unless 0 < p < 1.
double focal_cost(double p, double alpha = 0.25, double gamma = 2.0);

inline double combine_costs(const CostWeights& w, double kld, double cls,
                            double chamfer) {
  return w.kld * kld + w.cls * cls + w.chamfer * chamfer;
}

// Probabilities handed to focal_cost by combined_cost_matrix are clamped
// into [kProbClamp, 1 - kProbClamp] so hard 0/1 scores stay finite.
inline constexpr double kProbClamp = 1e-8;

// Entry (k, m) = w.kld * kld_cost + w.cls * focal_cost(score of gt m's class)
// + w.chamfer * chamfer_cost. A class id outside the score vector reads as
// probability 0 (then clamped).
CostMatrix combined_cost_matrix(std::span<const Prediction> preds,
                                std::span<const GroundTruth> gts,
                                const CostWeights& w = {},
                                const CostParams& params = {});

}  // namespace obbkit
