#pragma once

#include <array>
#include <numbers>
#include <span>
#include <vector>

namespace obbkit {

inline constexpr double kPi = std::numbers::pi;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// Reduces an angle into [0, pi). An input congruent to pi maps to 0.
double normalize_angle(double theta);

// Smallest distance between two angles on the circle of period pi.
double angular_distance_mod_pi(double a, double b);

// Rotated rectangle in image coordinates (y grows downward). Theta is the
// angle of the width axis against +x, always held in [0, pi).
class OrientedBox {
 public:
  // Throws std::invalid_argument when w or h is not positive or any field is
  // not finite.
  OrientedBox(double cx, double cy, double w, double h, double theta);

  double cx() const { return cx_; }
  double cy() const { return cy_; }
  double w() const { return w_; }
  double h() const { return h_; }
  double theta() const { return theta_; }
  double area() const { return w_ * h_; }

  friend bool operator==(const OrientedBox&, const OrientedBox&) = default;

 private:
  double cx_;
  double cy_;
  double w_;
  double h_;
  double theta_;
};

// Unordered point set, at least three points.
struct VertexSet {
  std::vector<Point2> points;
};

struct AxisRect {
  double cx = 0.0;
  double cy = 0.0;
  double width = 0.0;
  double height = 0.0;

  double x_min() const { return cx - width / 2.0; }
  double x_max() const { return cx + width / 2.0; }
  double y_min() const { return cy - height / 2.0; }
  double y_max() const { return cy + height / 2.0; }
};

// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct SymMat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const { return xx * yy - xy * xy; }
  double trace() const { return xx + yy; }
};

struct GaussianBox {
  Point2 mean;
  SymMat2 cov;
};

// The four corners c +/- (w/2)(cos, sin) +/- (h/2)(-sin, cos) in sign order
// (++, +-, -+, --). Not a polygon ordering; see box_polygon for that.
VertexSet box_to_vertices(const OrientedBox& b);

// The same corners as box_to_vertices in counter-clockwise order (in a y-up
// frame; clockwise on screen).
std::array<Point2, 4> box_polygon(const OrientedBox& b);

double polygon_signed_area(std::span<const Point2> poly);

// Area of the intersection of two convex polygons. Either winding is
// accepted. Polygons with |area| < 1e-12 intersect nothing.
double convex_intersection_area(std::span<const Point2> a,
                                std::span<const Point2> b);
double convex_intersection_area(const VertexSet& a, const VertexSet& b);

double rotated_iou(const OrientedBox& a, const OrientedBox& b);

AxisRect box_to_aabb(const OrientedBox& b);

// Unnormalized: mean = center, Lambda = diag(w^2/4, h^2/4).
// Normalized: mean = origin, Lambda scaled by 1/max(w, h)^2.
GaussianBox box_to_gaussian(const OrientedBox& b, bool normalize = false);

// Rebuilds a box from a positive-definite covariance. The principal axis
// carries width 2*sqrt(e1)*scale. When the eigenvalues tie within 1e-9 the
// angle is taken from theta_hint. Otherwise theta_hint picks which of the
// two equivalent (w, h, theta) labelings of the rectangle is returned: the one
// whose angle is nearest the hint modulo pi. Throws std::domain_error for a
// covariance that is not positive-definite.
OrientedBox gaussian_to_box(const GaussianBox& g, double scale,
                            double theta_hint);

// (w, h, theta) and (h, w, theta + pi/2) describe the same rectangle. Returns
// whichever labeling has its angle nearest `theta_hint` (ties keep `b`).
OrientedBox relabel_toward(const OrientedBox& b, double theta_hint);

// Labeling with theta in [0, pi/2).
OrientedBox canonical_labeling(const OrientedBox& b);

// Largest corner-to-corner distance between two labelings of boxes; zero for
// the same rectangle regardless of labeling.
double rectangle_distance(const OrientedBox& a, const OrientedBox& b);

}  // namespace obbkit
