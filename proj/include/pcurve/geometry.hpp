#pragma once

#include <array>
#include <cmath>
#include <span>

namespace pcurve {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

using Point = Vec2;

// Pseudo-scalar product: oriented area of the parallelogram spanned by u, v.
constexpr double cross(Vec2 u, Vec2 v) { return u.x * v.y - u.y * v.x; }
constexpr double dot(Vec2 u, Vec2 v) { return u.x * v.x + u.y * v.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Point a, Point b) { return norm(b - a); }
constexpr Point lerp(Point a, Point b, double t) { return a + t * (b - a); }

// Signed doubled area with the convention S(ABC) = AC x CB. Positive for the
// canonical triangle (-1,1), (1,1), (0,-1); zero for collinear points.
constexpr double doubled_area(Point a, Point b, Point c) { return cross(c - a, b - c); }

// Largest extent of the bounding box of the three points.
double bounding_scale(Point a, Point b, Point c);

// |doubled_area| <= 1e-12 * bounding_scale^2.
bool is_degenerate(Point a, Point b, Point c);

inline constexpr double kDegeneracyTolerance = 1e-12;

struct Triangle {
  Point a;
  Point b;
  Point c;

  double doubled_area() const { return pcurve::doubled_area(a, b, c); }
  double plain_area() const { return 0.5 * std::abs(doubled_area()); }
  double longest_side() const;
  bool degenerate() const { return is_degenerate(a, b, c); }
};

// x -> linear * x + translation.
class AffineMap {
 public:
  AffineMap() = default;
  AffineMap(std::array<double, 4> linear, Vec2 translation);

  static AffineMap identity() { return {}; }

  // Unique map sending src.a, src.b, src.c to dst.a, dst.b, dst.c. Throws
  // std::invalid_argument if either triangle is degenerate.
  static AffineMap between(const Triangle& src, const Triangle& dst);

  Point operator()(Point p) const;
  Vec2 apply_linear(Vec2 v) const;
  double determinant() const { return linear_[0] * linear_[3] - linear_[1] * linear_[2]; }
  // Ratio of image area to source area.
  double area_scale() const { return std::abs(determinant()); }
  const std::array<double, 4>& linear() const { return linear_; }
  Vec2 translation() const { return translation_; }

  AffineMap inverse() const;
  // (*this)(other(x))
  AffineMap after(const AffineMap& other) const;

 private:
  std::array<double, 4> linear_{1.0, 0.0, 0.0, 1.0};  // row-major
  Vec2 translation_{};
};

// Canonical triangle: chain start (-1,1), chain end (1,1), apex (0,-1).
inline constexpr Triangle kCanonicalTriangle{{-1.0, 1.0}, {1.0, 1.0}, {0.0, -1.0}};

// Map taking w = (chain start, chain end, apex) onto kCanonicalTriangle.
AffineMap canonical_map(const Triangle& w);

// True iff every consecutive turn has the same strict sign. A turn counts as
// strict when |cross(b - a, c - b)| > rel_tol * |b - a| * |c - b|. Chains with
// fewer than three points are never strictly convex.
bool is_strictly_convex(std::span<const Point> chain, double rel_tol = 1e-12);

// Six segment lengths of the shrinkage bound: P on AC, R on BC, Q on PR, with
// AP:AC, PQ:PR, BR:BC in [1/8, 7/8]. Returns true iff |AP|, |PQ|, |QR|, |RB|,
// |AQ|, |QB| are all at most (399/400) * longest side of t. Configurations that
// violate the preconditions throw std::domain_error.
bool segment_bound_check(const Triangle& t, Point p, Point q, Point r, double abs_tol = 1e-12);

inline constexpr double kShrinkFactor = 399.0 / 400.0;

}  // namespace pcurve
