#include "pcurve/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcurve {

SeededGenerator::SeededGenerator(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9E3779B9u};
  engine_.seed(seq);
}

double SeededGenerator::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededGenerator::uniform_open01() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::size_t SeededGenerator::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("SeededGenerator::index: empty range");
  // Rejecting the top partial block makes the modulo exactly uniform.
  const std::uint64_t bound = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x < limit) return static_cast<std::size_t>(x % bound);
  }
}

namespace {

std::uint64_t poisson_inversion(double mean, SeededGenerator& rng) {
  const double u = rng.uniform01();
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  while (u >= cdf) {
    ++k;
    p *= mean / static_cast<double>(k);
    const double next = cdf + p;
    if (next == cdf) break;  // tail exhausted in double precision
    cdf = next;
  }
  return k;
}

// Hoermann (1993), "The transformed rejection method for generating Poisson
// random variables".
std::uint64_t poisson_ptrs(double mean, SeededGenerator& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform01() - 0.5;
    const double v = rng.uniform01();
    const double us = 0.5 - std::abs(u);
    if (us <= 0.0) continue;
    const double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kd);
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + kd * loglam - std::lgamma(kd + 1.0))
      return static_cast<std::uint64_t>(kd);
  }
}

}  // namespace

std::uint64_t poisson_count(double mean, SeededGenerator& rng) {
  if (!std::isfinite(mean) || mean < 0.0)
    throw std::invalid_argument("poisson_count: mean must be finite and non-negative");
  if (mean == 0.0) return 0;
  return mean < 30.0 ? poisson_inversion(mean, rng) : poisson_ptrs(mean, rng);
}

Point uniform_in_triangle(Point a, Point b, Point c, SeededGenerator& rng) {
  const double r1 = std::sqrt(rng.uniform01());
  const double r2 = rng.uniform01();
  return (1.0 - r1) * a + (r1 * (1.0 - r2)) * b + (r1 * r2) * c;
}

PoissonBatch sample_in_wedges(double intensity, std::span<const Wedge> wedges,
                              SeededGenerator& rng) {
  if (!std::isfinite(intensity) || intensity < 0.0)
    throw std::invalid_argument("sample_in_wedges: intensity must be finite and non-negative");
  PoissonBatch batch;
  batch.intensity = intensity;
  std::vector<double> cumulative;
  cumulative.reserve(wedges.size());
  double total = 0.0;
  for (const Wedge& w : wedges) {
    total += w.plain_area();
    cumulative.push_back(total);
  }
  batch.region_area = total;
  if (intensity == 0.0 || total == 0.0) return batch;

  const std::uint64_t count = poisson_count(intensity * total, rng);
  batch.points.reserve(count);
  batch.wedge.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    const double target = rng.uniform01() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    if (it == cumulative.end()) --it;
    const auto i = static_cast<std::size_t>(it - cumulative.begin());
    const Wedge& w = wedges[i];
    batch.points.push_back(uniform_in_triangle(w.c_prev, w.apex, w.c_next, rng));
    batch.wedge.push_back(i);
  }
  return batch;
}

}  // namespace pcurve
