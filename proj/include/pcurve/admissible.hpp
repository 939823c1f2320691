#pragma once

// Admissible insertion points for one wedge.
//
// In canonical coordinates (chain start A = (-1,1), chain end B = (1,1),
// apex C = (0,-1)) a candidate is Q = (t, t^2 + tau) with |t| <= 1/2 and
// |tau| <= delta. The line y = 2tx - t^2 + tau through Q meets AC at P and BC
// at R; every ratio AP:AC, PQ:PR, RC:BC (and complements) then lies within
// delta of (1 +- t)/2, hence in [1/8, 7/8], and the AM-GM bound makes the
// affine-length decrement at most alpha when delta = sqrt(alpha / S^{1/3}) / 8.
// The band has canonical area 2 * delta, i.e. delta * S / 2 in the wedge's own
// plain-area units. It is a sufficient sub-region, not the maximal one.

#include <array>
#include <cstddef>
#include <optional>

#include "pcurve/chain.hpp"
#include "pcurve/geometry.hpp"
#include "pcurve/sampler.hpp"

namespace pcurve {

// 1 - (s1/s)^{1/3} - (s2/s)^{1/3}. Throws std::domain_error for s <= 0.
double err(double s, double s1, double s2);

// |(x+y+z)/3 - (xyz)^{1/3} - (1/6)(x'+y'+z')((x'-y')^2+(y'-z')^2+(z'-x')^2)|
// with x' = x^{1/3} etc. Throws std::domain_error for negative inputs.
double amgm_expansion_residual(double x, double y, double z);

// min(1/8, sqrt(alpha / s^{1/3}) / 8).
double delta_for(double alpha, double s);

// Canonical half-height band of one wedge for a given alpha.
struct AdmissibleBand {
  std::size_t wedge_index = 0;
  double delta = 0.0;
  double t_min = -0.5;
  double t_max = 0.5;
  AffineMap to_canonical;
  double region_area = 0.0;  // plain area in wedge coordinates

  static AdmissibleBand of(const Wedge& w, double alpha, std::size_t wedge_index = 0);
};

struct InsertionPoints {
  Point q;
  Point p;  // on [C_{i-1}, D_i]
  Point r;  // on [D_i, C_i]
};

// Ratios AP:AC, PQ:PR, RC:BC, PC:AC, QR:PR, BR:BC measured in the wedge,
// with A = C_{i-1}, B = C_i, C = D_i.
std::array<double, 6> insertion_ratios(const Wedge& w, const InsertionPoints& ins);

// Accepts q iff its canonical image (t, y) has |t| <= 1/2 and
// |y - t^2| <= delta_for(alpha, S). Returns q with the matching P and R.
std::optional<InsertionPoints> is_admissible(const Wedge& w, Point q, double alpha);

// Uniform draw from the band (t and tau independent uniforms). Throws
// std::domain_error for alpha <= 0.
InsertionPoints sample_admissible(const Wedge& w, double alpha, SeededGenerator& rng);

// Exact plain area of the band: delta_for(alpha, S) * S / 2.
double admissible_area(const Wedge& w, double alpha);

// Insertion triple for canonical parameters (t, tau), mapped into w.
InsertionPoints band_point(const Wedge& w, double t, double tau);

}  // namespace pcurve
