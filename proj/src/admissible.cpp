#include "pcurve/admissible.hpp"

#include <cmath>
#include <stdexcept>

namespace pcurve {

namespace {

// Canonical-coordinate slack on the band edges, absorbing round-off in the
// wedge-to-canonical map.
constexpr double kBandSlack = 1e-12;

}  // namespace

double err(double s, double s1, double s2) {
  if (!(s > 0.0)) throw std::domain_error("err: parent area must be positive");
  return 1.0 - std::cbrt(s1 / s) - std::cbrt(s2 / s);
}

double amgm_expansion_residual(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || z < 0.0)
    throw std::domain_error("amgm_expansion_residual: inputs must be non-negative");
  const double cx = std::cbrt(x), cy = std::cbrt(y), cz = std::cbrt(z);
  const double lhs = (x + y + z) / 3.0 - cx * cy * cz;
  const double rhs = (cx + cy + cz) *
                     ((cx - cy) * (cx - cy) + (cy - cz) * (cy - cz) + (cz - cx) * (cz - cx)) / 6.0;
  return std::abs(lhs - rhs);
}

double delta_for(double alpha, double s) {
  if (!(s > 0.0)) throw std::domain_error("delta_for: wedge area must be positive");
  if (!(alpha > 0.0)) return 0.0;
  return std::min(0.125, std::sqrt(alpha / std::cbrt(s)) / 8.0);
}

AdmissibleBand AdmissibleBand::of(const Wedge& w, double alpha, std::size_t wedge_index) {
  AdmissibleBand band;
  band.wedge_index = wedge_index;
  band.delta = delta_for(alpha, w.s);
  band.to_canonical = canonical_map(w.as_triangle());
  // Canonical band area 2*delta shrinks by the map's area ratio 4/S.
  band.region_area = 2.0 * band.delta / band.to_canonical.area_scale();
  return band;
}

InsertionPoints band_point(const Wedge& w, double t, double tau) {
  const double ap = 0.5 * (1.0 + t) - tau / (2.0 * (1.0 + t));  // AP:AC
  const double rc = 0.5 * (1.0 + t) + tau / (2.0 * (1.0 - t));  // RC:BC
  const double x_p = ap - 1.0;
  const double x_r = rc;
  const double mu = (t - x_p) / (x_r - x_p);  // PQ:PR
  const Point p = lerp(w.c_prev, w.apex, ap);
  const Point r = lerp(w.c_next, w.apex, 1.0 - rc);
  return {lerp(p, r, mu), p, r};
}

std::array<double, 6> insertion_ratios(const Wedge& w, const InsertionPoints& ins) {
  const Point a = w.c_prev, b = w.c_next, c = w.apex;
  const double ac = distance(a, c), bc = distance(b, c), pr = distance(ins.p, ins.r);
  return {distance(a, ins.p) / ac, distance(ins.p, ins.q) / pr, distance(ins.r, c) / bc,
          distance(ins.p, c) / ac, distance(ins.q, ins.r) / pr, distance(b, ins.r) / bc};
}

std::optional<InsertionPoints> is_admissible(const Wedge& w, Point q, double alpha) {
  if (!(alpha >= 0.0)) return std::nullopt;
  if (!std::isfinite(q.x) || !std::isfinite(q.y)) return std::nullopt;
  const Point z = canonical_map(w.as_triangle())(q);
  const double t = z.x;
  if (std::abs(t) > 0.5 + kBandSlack) return std::nullopt;
  const double tau = z.y - t * t;
  if (std::abs(tau) > delta_for(alpha, w.s) + kBandSlack) return std::nullopt;
  InsertionPoints ins = band_point(w, t, tau);
  ins.q = q;
  return ins;
}

InsertionPoints sample_admissible(const Wedge& w, double alpha, SeededGenerator& rng) {
  if (!(alpha > 0.0)) throw std::domain_error("sample_admissible: alpha must be positive");
  const double delta = delta_for(alpha, w.s);
  const double t = rng.uniform(-0.5, 0.5);
  const double tau = rng.uniform(-delta, delta);
  return band_point(w, t, tau);
}

double admissible_area(const Wedge& w, double alpha) {
  if (!(alpha > 0.0)) return 0.0;
  return 0.5 * delta_for(alpha, w.s) * w.s;
}

}  // namespace pcurve
