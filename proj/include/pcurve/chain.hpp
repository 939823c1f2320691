#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "pcurve/geometry.hpp"

namespace pcurve {

// Triangle C_{i-1} D_i C_i between two consecutive inner vertices and the
// outer vertex they straddle. `s` is the cached unsigned doubled area.
struct Wedge {
  Point c_prev;
  Point apex;
  Point c_next;
  double s = 0.0;

  static Wedge make(Point c_prev, Point apex, Point c_next);

  double plain_area() const { return 0.5 * s; }
  double longest_side() const { return as_triangle().longest_side(); }
  // Chain start, chain end, apex: the order canonical_map expects.
  Triangle as_triangle() const { return {c_prev, c_next, apex}; }
};

// Rejected insertion; the pair is left untouched.
class InsertError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical invariant of the pair failed. Never expected in a valid run.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Inner chain A = C_0, ..., C_n = B inscribed in the outer chain
// A, D_1, ..., D_n, B, stored as the n wedges they bound, together with the
// generalized affine length ell = sum_i S_i^{1/3}.
class InscribedChainPair {
 public:
  // Start state: inner chain AB, outer chain ACB, one wedge. Throws
  // std::invalid_argument for a degenerate root.
  static InscribedChainPair initial(const Triangle& root);

  const Triangle& root() const { return root_; }
  const std::vector<Wedge>& wedges() const { return wedges_; }
  std::size_t wedge_count() const { return wedges_.size(); }
  double ell() const { return ell_; }

  std::vector<Point> inner() const;
  std::vector<Point> outer() const;

  // sum_i S_i^{1/3} recomputed from the wedges.
  double affine_length() const;

  // Splits wedge i at q, with p on [C_{i-1}, D_i], r on [D_i, C_i] and q
  // strictly inside the wedge on segment [p, r]. Returns the affine-length
  // decrement S_i^{1/3} - S(C_{i-1} p q)^{1/3} - S(q r C_i)^{1/3}.
  double insert(std::size_t i, Point q, Point p, Point r);

  // Image under an affine map; areas are recomputed, ell resynchronized.
  InscribedChainPair mapped(const AffineMap& map) const;

  nlohmann::json to_json() const;
  static InscribedChainPair from_json(const nlohmann::json& j);

 private:
  Triangle root_{};
  std::vector<Wedge> wedges_;
  double ell_ = 0.0;
  std::size_t inserts_since_resync_ = 0;
};

// Interval at which ell is recomputed from scratch.
inline constexpr std::size_t kEllResyncInterval = 1024;

}  // namespace pcurve
