#include "pcurve/pseudolattice.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace pcurve {

namespace {

std::vector<bool> sieve(std::uint64_t max_value) {
  std::vector<bool> is_prime(max_value + 1, true);
  is_prime[0] = false;
  if (max_value >= 1) is_prime[1] = false;
  for (std::uint64_t p = 2; p * p <= max_value; ++p) {
    if (!is_prime[p]) continue;
    for (std::uint64_t m = p * p; m <= max_value; m += p) is_prime[m] = false;
  }
  return is_prime;
}

// Primes below 2^16: enough to factor any n < 2^32 by trial division.
const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    const auto flags = sieve(1u << 16);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < flags.size(); ++i)
      if (flags[i]) out.push_back(i);
    return out;
  }();
  return primes;
}

// p_k <= k (ln k + ln ln k) for k >= 6 (Rosser); prime powers are denser.
std::uint64_t value_bound_for_count(std::size_t count) {
  if (count < 6) return 16;
  const double k = static_cast<double>(count);
  return static_cast<std::uint64_t>(k * (std::log(k) + std::log(std::log(k)))) + 16;
}

}  // namespace

PrimePowerTable::PrimePowerTable(std::uint64_t max_value) : max_value_(max_value) {
  const auto is_prime = sieve(max_value);
  for (std::uint64_t p = 2; p <= max_value; ++p) {
    if (!is_prime[p]) continue;
    std::uint64_t v = p;
    for (std::uint32_t e = 1;; ++e) {
      powers_.push_back(PrimePower{v, p, e, 0});
      if (v > max_value / p) break;
      v *= p;
      if (v > max_value) break;
    }
  }
  std::sort(powers_.begin(), powers_.end(),
            [](const PrimePower& a, const PrimePower& b) { return a.value < b.value; });
  for (std::size_t i = 0; i < powers_.size(); ++i) powers_[i].index = i + 1;
}

PrimePowerTable PrimePowerTable::with_count(std::size_t count) {
  return PrimePowerTable(value_bound_for_count(count));
}

const PrimePower& PrimePowerTable::at(std::size_t k) const {
  if (k == 0) throw std::domain_error("prime power index must be >= 1");
  if (k > powers_.size())
    throw std::out_of_range("prime power index " + std::to_string(k) + " beyond table of " +
                            std::to_string(powers_.size()));
  return powers_[k - 1];
}

PrimePower prime_power_seq(std::size_t k) {
  if (k == 0) throw std::domain_error("prime power index must be >= 1");
  static std::mutex mutex;
  static std::shared_ptr<const PrimePowerTable> shared;
  std::shared_ptr<const PrimePowerTable> table;
  {
    std::lock_guard lock(mutex);
    if (!shared || shared->size() < k) {
      const std::size_t want = std::max<std::size_t>(k, shared ? 2 * shared->size() : 4096);
      shared = std::make_shared<const PrimePowerTable>(PrimePowerTable::with_count(want));
    }
    table = shared;
  }
  return table->at(k);
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  if (n == 0) throw std::domain_error("prime_divisors of 0");
  std::vector<std::uint64_t> out;
  for (const std::uint32_t p : small_primes()) {
    if (static_cast<std::uint64_t>(p) * p > n) break;
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) {
    // A cofactor with no divisor below 2^16 is prime only if it is below 2^32.
    if (n > 0xFFFFFFFFull)
      throw std::overflow_error("prime_divisors: cofactor too large for trial division");
    out.push_back(n);
  }
  return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  if (n == 0) throw std::domain_error("divisors of 0");
  std::vector<std::uint64_t> low, high;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    low.push_back(d);
    if (d != n / d) high.push_back(n / d);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

Intensity intensity(std::uint64_t n) {
  if (n == 0) throw std::domain_error("intensity: n must be >= 1");
  if (n > kMaxIntensityArgument)
    throw std::overflow_error("intensity: n = " + std::to_string(n) + " overflows 64-bit n^2");
  std::uint64_t w = n * n;
  for (const std::uint64_t p : prime_divisors(n)) {
    // p^2 divides what is left of n^2, so the division is exact.
    w = w / (p * p) * (p * p - 1);
  }
  return Intensity{n, w};
}

bool verify_partition(std::uint64_t n) {
  if (n > kMaxIntensityArgument)
    throw std::overflow_error("verify_partition: n = " + std::to_string(n) + " overflows");
  std::uint64_t sum = 0;
  for (const std::uint64_t d : divisors(n)) {
    const std::uint64_t w = intensity(d).w;
    if (sum > UINT64_MAX - w) throw std::overflow_error("verify_partition: divisor sum overflows");
    sum += w;
  }
  return sum == n * n;
}

}  // namespace pcurve
