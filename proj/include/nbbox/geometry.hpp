#pragma once

// Rotated-rectangle primitives. Everything here is header-only, templated on
// the scalar type, and free of shared state.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nbbox/error.hpp"

namespace nbbox {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Polyline = std::vector<Point2<Scalar>>;

/// Absolute tolerance for geometric predicates, in pixels.
template <typename Scalar>
inline constexpr Scalar kGeomEps = Scalar(1e-9);

/// Rotated rectangle. `theta` is in degrees and is never normalized
/// implicitly; see canonicalize().
template <typename Scalar>
struct OrientedBox {
  Point2<Scalar> center = Point2<Scalar>::Zero();
  Scalar w = Scalar(1);
  Scalar h = Scalar(1);
  Scalar theta = Scalar(0);

  OrientedBox() = default;
  OrientedBox(Scalar x_c, Scalar y_c, Scalar width, Scalar height, Scalar theta_deg)
      : center(x_c, y_c), w(width), h(height), theta(theta_deg) {}

  Scalar area() const { return w * h; }

  friend bool operator==(const OrientedBox& a, const OrientedBox& b) {
    return a.center.x() == b.center.x() && a.center.y() == b.center.y() && a.w == b.w &&
           a.h == b.h && a.theta == b.theta;
  }
};

using Point2d = Point2<double>;
using OrientedBoxd = OrientedBox<double>;

template <typename Scalar>
Scalar cross(const Point2<Scalar>& a, const Point2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Rotation matrix for an angle in degrees. Quarter turns are exact.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> rotation_deg(Scalar degrees) {
  Scalar c;
  Scalar s;
  const Scalar quarters = degrees / Scalar(90);
  if (quarters == std::round(quarters)) {
    static constexpr std::array<std::array<int, 2>, 4> kQuarter{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
    auto q = static_cast<int>(std::fmod(std::round(quarters), Scalar(4)));
    if (q < 0) q += 4;
    c = Scalar(kQuarter[q][0]);
    s = Scalar(kQuarter[q][1]);
  } else {
    const Scalar rad = degrees * (std::numbers::pi_v<Scalar> / Scalar(180));
    c = std::cos(rad);
    s = std::sin(rad);
  }
  Eigen::Matrix<Scalar, 2, 2> r;
  r << c, -s, s, c;
  return r;
}

/// Direction angle of a vector in degrees, exact on the axes.
template <typename Scalar>
Scalar atan2_deg(Scalar y, Scalar x) {
  if (y == Scalar(0)) return x >= Scalar(0) ? Scalar(0) : Scalar(180);
  if (x == Scalar(0)) return y > Scalar(0) ? Scalar(90) : Scalar(-90);
  return std::atan2(y, x) * (Scalar(180) / std::numbers::pi_v<Scalar>);
}

template <typename Scalar>
bool is_valid(const OrientedBox<Scalar>& box) {
  return std::isfinite(box.center.x()) && std::isfinite(box.center.y()) &&
         std::isfinite(box.w) && std::isfinite(box.h) && std::isfinite(box.theta) &&
         box.w > Scalar(0) && box.h > Scalar(0);
}

template <typename Scalar>
void validate(const OrientedBox<Scalar>& box) {
  if (!is_valid(box)) {
    throw InvalidInput("oriented box must have finite fields and positive width/height");
  }
}

/// Shoelace area; positive for counter-clockwise vertex order.
template <typename Scalar>
Scalar signed_area(std::span<const Point2<Scalar>> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) return Scalar(0);
  Scalar twice = 0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(vertices[i], vertices[(i + 1) % n]);
  }
  return twice / Scalar(2);
}

namespace detail {

struct PolygonKey {
  explicit PolygonKey() = default;
};

/// Distance from p to the infinite line through a and b (|a-b| > 0).
template <typename Scalar>
Scalar line_distance(const Point2<Scalar>& p, const Point2<Scalar>& a, const Point2<Scalar>& b) {
  const Point2<Scalar> ab = b - a;
  return std::abs(cross<Scalar>(ab, p - a)) / ab.norm();
}

/// Drops repeated vertices and vertices lying on the segment joining their
/// neighbours, both at tolerance eps. Operates on a closed ring.
template <typename Scalar>
Polyline<Scalar> simplify_ring(Polyline<Scalar> ring, Scalar eps) {
  bool changed = true;
  while (changed && ring.size() >= 2) {
    changed = false;
    for (std::size_t i = 0; i < ring.size() && ring.size() >= 2; ++i) {
      const std::size_t next = (i + 1) % ring.size();
      if ((ring[i] - ring[next]).norm() <= eps) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(next));
        changed = true;
        break;
      }
    }
    if (changed || ring.size() < 3) continue;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const auto& prev = ring[(i + ring.size() - 1) % ring.size()];
      const auto& next = ring[(i + 1) % ring.size()];
      if (line_distance(ring[i], prev, next) <= eps) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return ring;
}

}  // namespace detail

/// Strictly convex, counter-clockwise polygon with at least three vertices.
template <typename Scalar>
class ConvexPolygon {
 public:
  using Point = Point2<Scalar>;

  /// Caller guarantees the invariants; prefer from_vertices().
  ConvexPolygon(detail::PolygonKey, Polyline<Scalar> vertices) : vertices_(std::move(vertices)) {}

  /// Merges near-duplicate and collinear vertices, fixes orientation, and
  /// rejects anything that is not a non-degenerate convex polygon.
  static ConvexPolygon from_vertices(Polyline<Scalar> vertices, Scalar eps = kGeomEps<Scalar>) {
    for (const auto& v : vertices) {
      if (!v.allFinite()) throw InvalidInput("polygon vertex is not finite");
    }
    auto ring = detail::simplify_ring(std::move(vertices), eps);
    if (ring.size() < 3) throw InvalidInput("polygon needs at least 3 distinct vertices");
    Scalar area = signed_area<Scalar>(ring);
    if (std::abs(area) <= eps) throw InvalidInput("polygon has zero area");
    if (area < 0) std::reverse(ring.begin(), ring.end());
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point e0 = ring[(i + 1) % n] - ring[i];
      const Point e1 = ring[(i + 2) % n] - ring[(i + 1) % n];
      if (cross<Scalar>(e0, e1) < -eps * e0.norm()) throw InvalidInput("polygon is not convex");
    }
    return ConvexPolygon(detail::PolygonKey{}, std::move(ring));
  }

  const Polyline<Scalar>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Scalar area() const { return signed_area<Scalar>(vertices_); }

  bool contains(const Point& p, Scalar eps = kGeomEps<Scalar>) const {
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point edge = vertices_[(i + 1) % n] - vertices_[i];
      if (cross<Scalar>(edge, p - vertices_[i]) < -eps * edge.norm()) return false;
    }
    return true;
  }

 private:
  Polyline<Scalar> vertices_;
};

/// Corners of the box in counter-clockwise order, starting from the corner
/// at local offset (-w/2, -h/2).
template <typename Scalar>
std::array<Point2<Scalar>, 4> box_corners(const OrientedBox<Scalar>& box) {
  const Eigen::Matrix<Scalar, 2, 2> r = rotation_deg(box.theta);
  const Scalar hw = box.w / Scalar(2);
  const Scalar hh = box.h / Scalar(2);
  return {box.center + r * Point2<Scalar>(-hw, -hh), box.center + r * Point2<Scalar>(hw, -hh),
          box.center + r * Point2<Scalar>(hw, hh), box.center + r * Point2<Scalar>(-hw, hh)};
}

template <typename Scalar>
ConvexPolygon<Scalar> obb_to_polygon(const OrientedBox<Scalar>& box) {
  validate(box);
  const auto c = box_corners(box);
  return ConvexPolygon<Scalar>(detail::PolygonKey{}, Polyline<Scalar>(c.begin(), c.end()));
}

/// Maps theta into [-90, 90) with w >= h; squares (|w - h| <= eps) end up
/// with theta in [-45, 45). Geometry is unchanged.
template <typename Scalar>
OrientedBox<Scalar> canonicalize(OrientedBox<Scalar> box, Scalar eps = kGeomEps<Scalar>) {
  const auto reduce = [](Scalar t) {
    return t - Scalar(180) * std::floor((t + Scalar(90)) / Scalar(180));
  };
  if (box.w < box.h) {
    std::swap(box.w, box.h);
    box.theta += Scalar(90);
  }
  box.theta = reduce(box.theta);
  if (std::abs(box.w - box.h) <= eps && (box.theta >= Scalar(45) || box.theta < Scalar(-45))) {
    std::swap(box.w, box.h);
    box.theta += box.theta >= Scalar(45) ? Scalar(-90) : Scalar(90);
  }
  return box;
}

/// Convex hull (Andrew's monotone chain), counter-clockwise, with collinear
/// and near-duplicate points merged at tolerance eps.
template <typename Scalar>
Polyline<Scalar> convex_hull(std::span<const Point2<Scalar>> points, Scalar eps = kGeomEps<Scalar>) {
  Polyline<Scalar> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return detail::simplify_ring(std::move(pts), eps);

  // Pop while the middle point does not make a strict left turn.
  const auto keeps_left_turn = [eps](const Point2<Scalar>& o, const Point2<Scalar>& a,
                                     const Point2<Scalar>& b) {
    const Point2<Scalar> ob = b - o;
    return cross<Scalar>(a - o, ob) > eps * ob.norm();
  };
  Polyline<Scalar> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && !keeps_left_turn(hull[k - 2], hull[k - 1], pts[i])) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && !keeps_left_turn(hull[k - 2], hull[k - 1], pts[i])) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return detail::simplify_ring(std::move(hull), eps);
}

template <typename Scalar>
struct MinRectResult {
  OrientedBox<Scalar> box;
  /// All input points coincide or are collinear; the thin dimension was set
  /// to eps.
  bool degenerate = false;
};

/// Minimum-area enclosing rectangle via convex hull and rotating calipers
/// (one rectangle side is flush with a hull edge). The result is
/// canonicalized.
template <typename Scalar>
MinRectResult<Scalar> min_area_rect_checked(std::span<const Point2<Scalar>> points,
                                            Scalar eps = kGeomEps<Scalar>) {
  if (points.empty()) throw InvalidInput("min_area_rect needs at least one point");
  for (const auto& p : points) {
    if (!p.allFinite()) throw InvalidInput("min_area_rect input point is not finite");
  }
  const Polyline<Scalar> hull = convex_hull(points, eps);

  if (hull.size() == 1) {
    return {OrientedBox<Scalar>(hull[0].x(), hull[0].y(), eps, eps, Scalar(0)), true};
  }
  if (hull.size() == 2) {
    const Point2<Scalar> d = hull[1] - hull[0];
    const Point2<Scalar> mid = (hull[0] + hull[1]) / Scalar(2);
    const OrientedBox<Scalar> thin(mid.x(), mid.y(), d.norm(), eps, atan2_deg(d.y(), d.x()));
    return {canonicalize(thin, eps), true};
  }

  const std::size_t n = hull.size();
  Scalar best_area = std::numeric_limits<Scalar>::infinity();
  OrientedBox<Scalar> best;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2<Scalar> edge = hull[(i + 1) % n] - hull[i];
    const Point2<Scalar> u = edge / edge.norm();
    const Point2<Scalar> v(-u.y(), u.x());
    Scalar min_u = std::numeric_limits<Scalar>::infinity();
    Scalar max_u = -min_u;
    Scalar min_v = min_u;
    Scalar max_v = -min_u;
    for (const auto& p : hull) {
      const Scalar pu = p.dot(u);
      const Scalar pv = p.dot(v);
      min_u = std::min(min_u, pu);
      max_u = std::max(max_u, pu);
      min_v = std::min(min_v, pv);
      max_v = std::max(max_v, pv);
    }
    const Scalar area = (max_u - min_u) * (max_v - min_v);
    if (area < best_area) {
      best_area = area;
      const Point2<Scalar> c = u * ((min_u + max_u) / Scalar(2)) + v * ((min_v + max_v) / Scalar(2));
      best = OrientedBox<Scalar>(c.x(), c.y(), max_u - min_u, max_v - min_v,
                                 atan2_deg(edge.y(), edge.x()));
    }
  }
  return {canonicalize(best, eps), false};
}

template <typename Scalar>
OrientedBox<Scalar> min_area_rect(std::span<const Point2<Scalar>> points) {
  return min_area_rect_checked(points).box;
}

/// Sutherland-Hodgman: clips an arbitrary simple polygon by a convex one.
/// The result may contain repeated or collinear vertices.
template <typename Scalar>
Polyline<Scalar> clip_polygon(const Polyline<Scalar>& subject, const ConvexPolygon<Scalar>& clip) {
  Polyline<Scalar> out = subject;
  const auto& cv = clip.vertices();
  for (std::size_t e = 0; e < cv.size() && !out.empty(); ++e) {
    const Point2<Scalar> p = cv[e];
    const Point2<Scalar> dir = cv[(e + 1) % cv.size()] - p;
    Polyline<Scalar> in;
    in.swap(out);
    for (std::size_t i = 0; i < in.size(); ++i) {
      const Point2<Scalar>& cur = in[i];
      const Point2<Scalar>& prev = in[(i + in.size() - 1) % in.size()];
      const Scalar dc = cross<Scalar>(dir, cur - p);
      const Scalar dp = cross<Scalar>(dir, prev - p);
      const bool cur_in = dc >= Scalar(0);
      const bool prev_in = dp >= Scalar(0);
      if (cur_in != prev_in) out.push_back(prev + (cur - prev) * (dp / (dp - dc)));
      if (cur_in) out.push_back(cur);
    }
  }
  return out;
}

/// Intersection of two convex polygons; nullopt when empty or of zero area
/// (touching edges count as no overlap).
template <typename Scalar>
std::optional<ConvexPolygon<Scalar>> convex_intersection(const ConvexPolygon<Scalar>& a,
                                                         const ConvexPolygon<Scalar>& b,
                                                         Scalar eps = kGeomEps<Scalar>) {
  auto ring = detail::simplify_ring(clip_polygon(a.vertices(), b), eps);
  if (ring.size() < 3 || signed_area<Scalar>(ring) <= eps) return std::nullopt;
  return ConvexPolygon<Scalar>(detail::PolygonKey{}, std::move(ring));
}

template <typename Scalar>
Scalar intersection_area(const ConvexPolygon<Scalar>& a, const ConvexPolygon<Scalar>& b) {
  const auto inter = convex_intersection(a, b);
  return inter ? inter->area() : Scalar(0);
}

/// Intersection over union of two rotated rectangles, in [0, 1].
template <typename Scalar>
Scalar rotated_iou(const OrientedBox<Scalar>& a, const OrientedBox<Scalar>& b) {
  validate(a);
  validate(b);
  if (a == b) return Scalar(1);
  // Fixed operand order keeps the result exactly symmetric.
  const auto key = [](const OrientedBox<Scalar>& x) {
    return std::array<Scalar, 5>{x.center.x(), x.center.y(), x.w, x.h, x.theta};
  };
  const bool swap = key(b) < key(a);
  const OrientedBox<Scalar>& first = swap ? b : a;
  const OrientedBox<Scalar>& second = swap ? a : b;
  const Scalar inter = intersection_area(obb_to_polygon(first), obb_to_polygon(second));
  const Scalar uni = a.area() + b.area() - inter;
  if (uni <= Scalar(0)) return Scalar(0);
  return std::clamp(inter / uni, Scalar(0), Scalar(1));
}

/// True when both boxes describe the same rectangle (same corner set within
/// eps), regardless of the (w, h, theta) representation chosen.
template <typename Scalar>
bool same_geometry(const OrientedBox<Scalar>& a, const OrientedBox<Scalar>& b,
                   Scalar eps = kGeomEps<Scalar>) {
  const auto ca = box_corners(a);
  const auto cb = box_corners(b);
  return std::all_of(ca.begin(), ca.end(), [&](const Point2<Scalar>& p) {
    return std::any_of(cb.begin(), cb.end(),
                       [&](const Point2<Scalar>& q) { return (p - q).norm() <= eps; });
  });
}

template <typename Scalar>
bool box_contains(const OrientedBox<Scalar>& box, const Point2<Scalar>& p,
                  Scalar eps = kGeomEps<Scalar>) {
  const Point2<Scalar> local = rotation_deg(box.theta).transpose() * (p - box.center);
  return std::abs(local.x()) <= box.w / Scalar(2) + eps &&
         std::abs(local.y()) <= box.h / Scalar(2) + eps;
}

}  // namespace nbbox
