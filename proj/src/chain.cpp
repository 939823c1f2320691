#include "pcurve/chain.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace pcurve {

namespace {

constexpr double kCollinearTolerance = 1e-9;
constexpr double kParamSlack = 1e-12;
constexpr double kDecrementFloor = -1e-12;

// Relative offset from line ab and position along it.
void locate(Point a, Point b, Point p, double& param, double& offset) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  param = dot(p - a, d) / len2;
  offset = std::abs(cross(d, p - a)) / len2;
}

bool on_segment(Point a, Point b, Point p) {
  double param = 0, offset = 0;
  locate(a, b, p, param, offset);
  return offset <= kCollinearTolerance && param >= -kParamSlack && param <= 1.0 + kParamSlack;
}

nlohmann::json point_json(Point p) { return nlohmann::json::array({p.x, p.y}); }
Point json_point(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

nlohmann::json points_json(const std::vector<Point>& pts) {
  auto arr = nlohmann::json::array();
  for (const Point& p : pts) arr.push_back(point_json(p));
  return arr;
}

}  // namespace

Wedge Wedge::make(Point c_prev, Point apex, Point c_next) {
  return {c_prev, apex, c_next, std::abs(doubled_area(c_prev, apex, c_next))};
}

InscribedChainPair InscribedChainPair::initial(const Triangle& root) {
  if (root.degenerate()) throw std::invalid_argument("initial pair: degenerate root triangle");
  InscribedChainPair pair;
  pair.root_ = root;
  pair.wedges_.push_back(Wedge::make(root.a, root.c, root.b));
  pair.ell_ = std::cbrt(pair.wedges_.front().s);
  return pair;
}

std::vector<Point> InscribedChainPair::inner() const {
  std::vector<Point> pts;
  pts.reserve(wedges_.size() + 1);
  pts.push_back(root_.a);
  for (const Wedge& w : wedges_) pts.push_back(w.c_next);
  return pts;
}

std::vector<Point> InscribedChainPair::outer() const {
  std::vector<Point> pts;
  pts.reserve(wedges_.size() + 2);
  pts.push_back(root_.a);
  for (const Wedge& w : wedges_) pts.push_back(w.apex);
  pts.push_back(root_.b);
  return pts;
}

double InscribedChainPair::affine_length() const {
  double sum = 0.0;
  for (const Wedge& w : wedges_) sum += std::cbrt(w.s);
  return sum;
}

double InscribedChainPair::insert(std::size_t i, Point q, Point p, Point r) {
  if (i >= wedges_.size())
    throw InsertError("insert: wedge index " + std::to_string(i) + " out of range");
  const Wedge& w = wedges_[i];
  if (!on_segment(w.c_prev, w.apex, p)) throw InsertError("insert: P is not on [C_{i-1}, D_i]");
  if (!on_segment(w.apex, w.c_next, r)) throw InsertError("insert: R is not on [D_i, C_i]");

  double param = 0, offset = 0;
  locate(p, r, q, param, offset);
  if (offset > kCollinearTolerance) throw InsertError("insert: P, Q, R are not collinear");
  if (!(param > 0.0 && param < 1.0)) throw InsertError("insert: Q is not between P and R");

  // Strict interior: q sees every edge of the wedge with the wedge's orientation.
  const double orient = doubled_area(w.c_prev, w.apex, w.c_next);
  const double scale = bounding_scale(w.c_prev, w.apex, w.c_next);
  const double tol = kDegeneracyTolerance * scale * scale;
  const double s_a = doubled_area(q, w.apex, w.c_next);
  const double s_b = doubled_area(w.c_prev, q, w.c_next);
  const double s_c = doubled_area(w.c_prev, w.apex, q);
  const auto inside = [&](double part) { return orient > 0 ? part > tol : part < -tol; };
  if (!(inside(s_a) && inside(s_b) && inside(s_c)))
    throw InsertError("insert: Q is not strictly inside the wedge");

  const Wedge left = Wedge::make(w.c_prev, p, q);
  const Wedge right = Wedge::make(q, r, w.c_next);
  if (left.s <= tol || right.s <= tol) throw InsertError("insert: degenerate child wedge");

  const double decrement = std::cbrt(w.s) - std::cbrt(left.s) - std::cbrt(right.s);
  if (decrement < kDecrementFloor) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "insert: negative affine-length decrement %.3e (S=%.3e, S1=%.3e, S2=%.3e)",
                  decrement, w.s, left.s, right.s);
    throw InvariantError(buf);
  }

  wedges_[i] = left;
  wedges_.insert(wedges_.begin() + static_cast<std::ptrdiff_t>(i) + 1, right);
  ell_ -= decrement;
  if (++inserts_since_resync_ >= kEllResyncInterval) {
    ell_ = affine_length();
    inserts_since_resync_ = 0;
  }
  return decrement;
}

InscribedChainPair InscribedChainPair::mapped(const AffineMap& map) const {
  InscribedChainPair out;
  out.root_ = Triangle{map(root_.a), map(root_.b), map(root_.c)};
  out.wedges_.reserve(wedges_.size());
  for (const Wedge& w : wedges_) out.wedges_.push_back(Wedge::make(map(w.c_prev), map(w.apex), map(w.c_next)));
  out.ell_ = out.affine_length();
  return out;
}

nlohmann::json InscribedChainPair::to_json() const {
  nlohmann::json j;
  j["root"] = points_json({root_.a, root_.b, root_.c});
  j["inner"] = points_json(inner());
  j["outer"] = points_json(outer());
  j["ell"] = ell_;
  return j;
}

InscribedChainPair InscribedChainPair::from_json(const nlohmann::json& j) {
  const auto& root = j.at("root");
  InscribedChainPair pair =
      initial(Triangle{json_point(root.at(0)), json_point(root.at(1)), json_point(root.at(2))});
  const auto& inner = j.at("inner");
  const auto& outer = j.at("outer");
  if (outer.size() != inner.size() + 1 || inner.size() < 2)
    throw std::invalid_argument("pair record: outer chain must have one more vertex than inner");
  pair.wedges_.clear();
  for (std::size_t i = 0; i + 1 < inner.size(); ++i)
    pair.wedges_.push_back(
        Wedge::make(json_point(inner.at(i)), json_point(outer.at(i + 1)), json_point(inner.at(i + 1))));
  pair.ell_ = pair.affine_length();
  return pair;
}

}  // namespace pcurve
