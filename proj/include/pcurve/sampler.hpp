#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pcurve/chain.hpp"
#include "pcurve/geometry.hpp"

namespace pcurve {

// Reproducible random stream identified by (seed, stream). Draws depend only
// on the pair, never on the platform's distribution implementations.
class SeededGenerator {
 public:
  SeededGenerator(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform on the open interval (0, 1).
  double uniform_open01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // Uniform index in [0, n).
  std::size_t index(std::size_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

// Stream id for one trial and one wedge of a theorem assembly. Plain runs use
// wedge 0.
constexpr std::uint64_t stream_id(std::uint64_t trial, std::uint64_t wedge = 0) {
  return (trial << 20) | (wedge & 0xFFFFF);
}

// Poisson(mean). Inversion below 30, PTRS transformed rejection above.
// Throws std::invalid_argument for negative or non-finite means.
std::uint64_t poisson_count(double mean, SeededGenerator& rng);

// Uniform point in a triangle via the square-root parametrization.
Point uniform_in_triangle(Point a, Point b, Point c, SeededGenerator& rng);

struct PoissonBatch {
  std::vector<Point> points;
  std::vector<std::size_t> wedge;  // wedge index of each point
  double intensity = 0.0;          // points per unit plain area
  double region_area = 0.0;        // plain area of the union
};

// Homogeneous Poisson points over a union of non-overlapping wedges.
PoissonBatch sample_in_wedges(double intensity, std::span<const Wedge> wedges,
                              SeededGenerator& rng);

}  // namespace pcurve
