#pragma once

// Prime-power ordering and the intensities of the Poisson pseudo-lattice
// layers M_n. M_n is a Poisson configuration whose density per unit area is
// the Jordan totient J_2(n) = n^2 * prod_{p | n} (1 - 1/p^2), the number of
// points (a/n, b/n) with gcd(a, b, n) = 1 per unit square.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace pcurve {

struct PrimePower {
  std::uint64_t value = 0;
  std::uint64_t base = 0;
  std::uint32_t exponent = 0;
  std::size_t index = 0;  // 1-based position in the ascending sequence

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Intensity {
  std::uint64_t n = 0;
  std::uint64_t w = 0;  // points per unit area, exact

  double as_double() const { return static_cast<double>(w); }
};

// Ascending table of every prime power up to a bound. Immutable once built.
class PrimePowerTable {
 public:
  explicit PrimePowerTable(std::uint64_t max_value);

  // Smallest table guaranteed to contain at least `count` prime powers.
  static PrimePowerTable with_count(std::size_t count);

  std::uint64_t max_value() const { return max_value_; }
  std::size_t size() const { return powers_.size(); }

  // 1-based; throws std::domain_error for k == 0, std::out_of_range past the end.
  const PrimePower& at(std::size_t k) const;

 private:
  std::uint64_t max_value_;
  std::vector<PrimePower> powers_;
};

// k-th smallest prime power (q_1 = 2, q_2 = 3, q_3 = 4, ...). Backed by a
// shared table that is replaced, never mutated, when a larger k is requested.
PrimePower prime_power_seq(std::size_t k);

// Largest n accepted by intensity(); n^2 must fit in 64 bits.
inline constexpr std::uint64_t kMaxIntensityArgument = 0xFFFFFFFFull;

// Exact J_2(n). Throws std::domain_error for n == 0 and std::overflow_error
// for n > kMaxIntensityArgument.
Intensity intensity(std::uint64_t n);

// Distinct prime divisors of n in ascending order (trial division).
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

// All divisors of n in ascending order.
std::vector<std::uint64_t> divisors(std::uint64_t n);

// sum_{d | n} J_2(d) == n^2, evaluated in exact integer arithmetic.
bool verify_partition(std::uint64_t n);

}  // namespace pcurve
