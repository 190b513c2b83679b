#include "obbkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace obbkit {

namespace {

constexpr double kClipEps = 1e-12;
constexpr double kDegenerateArea = 1e-12;
constexpr double kEigenTie = 1e-9;

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::vector<Point2> ccw_copy(std::span<const Point2> poly) {
  std::vector<Point2> out(poly.begin(), poly.end());
  if (polygon_signed_area(out) < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

double normalize_angle(double theta) {
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  // fmod of a value just below a multiple of pi can round up to pi itself.
  if (t >= kPi) t = 0.0;
  return t;
}

double angular_distance_mod_pi(double a, double b) {
  const double d = normalize_angle(a - b);
  return std::min(d, kPi - d);
}

OrientedBox::OrientedBox(double cx, double cy, double w, double h,
                         double theta)
    : cx_(cx), cy_(cy), w_(w), h_(h), theta_(0.0) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) ||
      !std::isfinite(h) || !std::isfinite(theta)) {
    throw std::invalid_argument("OrientedBox: non-finite field");
  }
  if (!(w > 0.0) || !(h > 0.0)) {
    throw std::invalid_argument("OrientedBox: width and height must be > 0");
  }
  theta_ = normalize_angle(theta);
}

VertexSet box_to_vertices(const OrientedBox& b) {
  const double c = std::cos(b.theta());
  const double s = std::sin(b.theta());
  const double wx = b.w() / 2.0 * c;
  const double wy = b.w() / 2.0 * s;
  const double hx = -b.h() / 2.0 * s;
  const double hy = b.h() / 2.0 * c;
  VertexSet out;
  out.points = {
      {b.cx() + wx + hx, b.cy() + wy + hy},
      {b.cx() + wx - hx, b.cy() + wy - hy},
      {b.cx() - wx + hx, b.cy() - wy + hy},
      {b.cx() - wx - hx, b.cy() - wy - hy},
  };
  return out;
}

std::array<Point2, 4> box_polygon(const OrientedBox& b) {
  const auto v = box_to_vertices(b).points;
  // ++ -> -+ -> -- -> +- walks the rectangle; with y up that is CCW.
  return {v[0], v[2], v[3], v[1]};
}

double polygon_signed_area(std::span<const Point2> poly) {
  double acc = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % n];
    acc += p.x * q.y - q.x * p.y;
  }
  return acc / 2.0;
}

double convex_intersection_area(std::span<const Point2> a,
                                std::span<const Point2> b) {
  if (a.size() < 3 || b.size() < 3) return 0.0;
  if (std::abs(polygon_signed_area(a)) < kDegenerateArea ||
      std::abs(polygon_signed_area(b)) < kDegenerateArea) {
    return 0.0;
  }
  std::vector<Point2> subject = ccw_copy(a);
  const std::vector<Point2> clip = ccw_copy(b);

  std::vector<Point2> next;
  next.reserve(subject.size() + clip.size());
  for (std::size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const Point2& p = clip[e];
    const Point2& q = clip[(e + 1) % clip.size()];
    const double edge_len = std::hypot(q.x - p.x, q.y - p.y);
    const double tol = kClipEps * edge_len;

    next.clear();
    const std::size_t n = subject.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& cur = subject[i];
      const Point2& prev = subject[(i + n - 1) % n];
      const double c_cur = cross(p, q, cur);
      const double c_prev = cross(p, q, prev);
      const bool in_cur = c_cur >= -tol;
      const bool in_prev = c_prev >= -tol;
      if (in_cur != in_prev) {
        const double t = c_prev / (c_prev - c_cur);
        next.push_back({prev.x + t * (cur.x - prev.x),
                        prev.y + t * (cur.y - prev.y)});
      }
      if (in_cur) next.push_back(cur);
    }
    subject.swap(next);
  }
  if (subject.size() < 3) return 0.0;
  return std::max(0.0, polygon_signed_area(subject));
}

namespace {

// Vertex sets carry no ordering; sort by angle around the centroid.
std::vector<Point2> angular_order(const VertexSet& v) {
  Point2 c;
  for (const Point2& p : v.points) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(v.points.size());
  c.y /= static_cast<double>(v.points.size());
  std::vector<Point2> out = v.points;
  std::sort(out.begin(), out.end(), [&](const Point2& p, const Point2& q) {
    return std::atan2(p.y - c.y, p.x - c.x) < std::atan2(q.y - c.y, q.x - c.x);
  });
  return out;
}

}  // namespace

double convex_intersection_area(const VertexSet& a, const VertexSet& b) {
  if (a.points.size() < 3 || b.points.size() < 3) {
    throw std::invalid_argument("convex_intersection_area: need at least three vertices");
  }
  const auto pa = angular_order(a);
  const auto pb = angular_order(b);
  return convex_intersection_area(std::span<const Point2>(pa), std::span<const Point2>(pb));
}

double rotated_iou(const OrientedBox& a, const OrientedBox& b) {
  // Fixed argument order makes the result bitwise symmetric.
  const auto key = [](const OrientedBox& x) {
    return std::make_tuple(x.cx(), x.cy(), x.w(), x.h(), x.theta());
  };
  const bool swap = key(b) < key(a);
  const OrientedBox& first = swap ? b : a;
  const OrientedBox& second = swap ? a : b;

  const auto pa = box_polygon(first);
  const auto pb = box_polygon(second);
  const double inter = convex_intersection_area(std::span<const Point2>(pa),
                                                std::span<const Point2>(pb));
  const double uni = first.area() + second.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

AxisRect box_to_aabb(const OrientedBox& b) {
  const double c = std::abs(std::cos(b.theta()));
  const double s = std::abs(std::sin(b.theta()));
  return {b.cx(), b.cy(), b.w() * c + b.h() * s, b.w() * s + b.h() * c};
}

GaussianBox box_to_gaussian(const OrientedBox& b, bool normalize) {
  double w = b.w();
  double h = b.h();
  GaussianBox g;
  if (normalize) {
    const double m = std::max(w, h);
    w /= m;
    h /= m;
  } else {
    g.mean = {b.cx(), b.cy()};
  }
  const double l1 = w * w / 4.0;
  const double l2 = h * h / 4.0;
  const double c = std::cos(b.theta());
  const double s = std::sin(b.theta());
  // R diag(l1, l2) R^T with R = [[c, -s], [s, c]].
  g.cov.xx = l1 * c * c + l2 * s * s;
  g.cov.xy = (l1 - l2) * c * s;
  g.cov.yy = l1 * s * s + l2 * c * c;
  return g;
}

OrientedBox gaussian_to_box(const GaussianBox& g, double scale,
                            double theta_hint) {
  const SymMat2& m = g.cov;
  if (!std::isfinite(m.xx) || !std::isfinite(m.xy) || !std::isfinite(m.yy) ||
      !(m.xx > 0.0) || !(m.det() > 0.0)) {
    throw std::domain_error("gaussian_to_box: covariance not positive-definite");
  }
  if (!(scale > 0.0)) {
    throw std::invalid_argument("gaussian_to_box: scale must be > 0");
  }
  const double half_trace = m.trace() / 2.0;
  const double radius = std::hypot((m.xx - m.yy) / 2.0, m.xy);
  const double e1 = half_trace + radius;
  const double e2 = m.det() / e1;
  const double w = 2.0 * std::sqrt(e1) * scale;
  const double h = 2.0 * std::sqrt(e2) * scale;
  if (e1 - e2 <= kEigenTie) {
    return OrientedBox(g.mean.x, g.mean.y, w, h, theta_hint);
  }
  const double phi = 0.5 * std::atan2(2.0 * m.xy, m.xx - m.yy);
  return relabel_toward(OrientedBox(g.mean.x, g.mean.y, w, h, phi),
                        theta_hint);
}

OrientedBox relabel_toward(const OrientedBox& b, double theta_hint) {
  const OrientedBox alt(b.cx(), b.cy(), b.h(), b.w(), b.theta() + kPi / 2.0);
  if (angular_distance_mod_pi(alt.theta(), theta_hint) <
      angular_distance_mod_pi(b.theta(), theta_hint)) {
    return alt;
  }
  return b;
}

OrientedBox canonical_labeling(const OrientedBox& b) {
  if (b.theta() < kPi / 2.0) return b;
  return OrientedBox(b.cx(), b.cy(), b.h(), b.w(), b.theta() - kPi / 2.0);
}

double rectangle_distance(const OrientedBox& a, const OrientedBox& b) {
  const auto va = box_to_vertices(a).points;
  const auto vb = box_to_vertices(b).points;
  double worst = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const auto& from = pass == 0 ? va : vb;
    const auto& to = pass == 0 ? vb : va;
    for (const Point2& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point2& q : to) best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
      worst = std::max(worst, best);
    }
  }
  return worst;
}

}  // namespace obbkit
