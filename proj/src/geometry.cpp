#include "pcurve/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pcurve {

namespace {

// Position of p along [a, b] and its distance from the line, both relative.
struct SegmentFit {
  double param;
  double offset;  // |distance to line| / |b - a|
};

SegmentFit fit_on_segment(Point a, Point b, Point p) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return {0.0, norm(p - a) == 0.0 ? 0.0 : INFINITY};
  return {dot(p - a, d) / len2, std::abs(cross(d, p - a)) / len2};
}

constexpr double kOnLineTolerance = 1e-9;
constexpr double kRatioSlack = 1e-12;

void require_ratio(const char* name, double ratio) {
  if (ratio < 0.125 - kRatioSlack || ratio > 0.875 + kRatioSlack)
    throw std::domain_error(std::string("segment_bound_check: ratio ") + name + " = " +
                            std::to_string(ratio) + " outside [1/8, 7/8]");
}

}  // namespace

double bounding_scale(Point a, Point b, Point c) {
  const double w = std::max({a.x, b.x, c.x}) - std::min({a.x, b.x, c.x});
  const double h = std::max({a.y, b.y, c.y}) - std::min({a.y, b.y, c.y});
  return std::max(w, h);
}

bool is_degenerate(Point a, Point b, Point c) {
  const double scale = bounding_scale(a, b, c);
  return std::abs(doubled_area(a, b, c)) <= kDegeneracyTolerance * scale * scale;
}

double Triangle::longest_side() const {
  return std::max({distance(a, b), distance(b, c), distance(c, a)});
}

AffineMap::AffineMap(std::array<double, 4> linear, Vec2 translation)
    : linear_(linear), translation_(translation) {}

AffineMap AffineMap::between(const Triangle& src, const Triangle& dst) {
  if (src.degenerate()) throw std::invalid_argument("AffineMap::between: degenerate source triangle");
  if (dst.degenerate()) throw std::invalid_argument("AffineMap::between: degenerate target triangle");
  // linear * [e1 e2] = [f1 f2]  =>  linear = F * E^{-1}
  const Vec2 e1 = src.b - src.a, e2 = src.c - src.a;
  const Vec2 f1 = dst.b - dst.a, f2 = dst.c - dst.a;
  const double det = cross(e1, e2);
  const std::array<double, 4> e_inv{e2.y / det, -e2.x / det, -e1.y / det, e1.x / det};
  const std::array<double, 4> lin{
      f1.x * e_inv[0] + f2.x * e_inv[2], f1.x * e_inv[1] + f2.x * e_inv[3],
      f1.y * e_inv[0] + f2.y * e_inv[2], f1.y * e_inv[1] + f2.y * e_inv[3]};
  AffineMap m(lin, {});
  m.translation_ = dst.a - m.apply_linear(src.a);
  return m;
}

Vec2 AffineMap::apply_linear(Vec2 v) const {
  return {linear_[0] * v.x + linear_[1] * v.y, linear_[2] * v.x + linear_[3] * v.y};
}

Point AffineMap::operator()(Point p) const { return apply_linear(p) + translation_; }

AffineMap AffineMap::inverse() const {
  const double det = determinant();
  if (std::abs(det) <= 1e-300) throw std::domain_error("AffineMap::inverse: singular map");
  const std::array<double, 4> inv{linear_[3] / det, -linear_[1] / det, -linear_[2] / det,
                                  linear_[0] / det};
  AffineMap m(inv, {});
  m.translation_ = -m.apply_linear(translation_);
  return m;
}

AffineMap AffineMap::after(const AffineMap& other) const {
  const auto& a = linear_;
  const auto& b = other.linear_;
  AffineMap m({a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
               a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]},
              {});
  m.translation_ = apply_linear(other.translation_) + translation_;
  return m;
}

AffineMap canonical_map(const Triangle& w) { return AffineMap::between(w, kCanonicalTriangle); }

bool is_strictly_convex(std::span<const Point> chain, double rel_tol) {
  if (chain.size() < 3) return false;
  int sign = 0;
  for (std::size_t i = 0; i + 2 < chain.size(); ++i) {
    const Vec2 u = chain[i + 1] - chain[i];
    const Vec2 v = chain[i + 2] - chain[i + 1];
    const double turn = cross(u, v);
    if (!(std::abs(turn) > rel_tol * norm(u) * norm(v))) return false;
    const int s = turn > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return true;
}

bool segment_bound_check(const Triangle& t, Point p, Point q, Point r, double abs_tol) {
  const Point a = t.a, b = t.b, c = t.c;
  if (t.degenerate()) throw std::domain_error("segment_bound_check: degenerate triangle");
  const SegmentFit fp = fit_on_segment(a, c, p);
  const SegmentFit fr = fit_on_segment(b, c, r);
  const SegmentFit fq = fit_on_segment(p, r, q);
  if (fp.offset > kOnLineTolerance) throw std::domain_error("segment_bound_check: P not on AC");
  if (fr.offset > kOnLineTolerance) throw std::domain_error("segment_bound_check: R not on BC");
  if (fq.offset > kOnLineTolerance) throw std::domain_error("segment_bound_check: Q not on PR");
  require_ratio("AP:AC", fp.param);
  require_ratio("PQ:PR", fq.param);
  require_ratio("BR:BC", fr.param);

  const double bound = kShrinkFactor * t.longest_side() + abs_tol;
  const std::array<double, 6> lengths{distance(a, p), distance(p, q), distance(q, r),
                                      distance(r, b), distance(a, q), distance(q, b)};
  return std::all_of(lengths.begin(), lengths.end(), [bound](double l) { return l <= bound; });
}

}  // namespace pcurve
