#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "pcurve/pseudolattice.hpp"

using namespace pcurve;

TEST_CASE("first prime powers") {
  const std::uint64_t expected[] = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32};
  for (std::size_t k = 1; k <= std::size(expected); ++k) {
    CAPTURE(k);
    CHECK(prime_power_seq(k).value == expected[k - 1]);
    CHECK(prime_power_seq(k).index == k);
  }
  CHECK(prime_power_seq(10).base == 2);
  CHECK(prime_power_seq(10).exponent == 4);
  CHECK(prime_power_seq(15).base == 3);
  CHECK(prime_power_seq(15).exponent == 3);
}

TEST_CASE("prime power lookup grows the shared table") {
  // Frozen from an independent sieve.
  CHECK(prime_power_seq(1000).value == 7517);
  CHECK(prime_power_seq(10000).value == 103511);
  CHECK(prime_power_seq(3).value == 4);
}

TEST_CASE("prime power table bounds") {
  const PrimePowerTable t(100);
  CHECK(t.size() == 35);
  CHECK(t.at(35).value == 97);
  CHECK_THROWS_AS(t.at(0), std::domain_error);
  CHECK_THROWS_AS(t.at(36), std::out_of_range);
  CHECK(PrimePowerTable::with_count(5000).size() >= 5000);
  CHECK_THROWS_AS(prime_power_seq(0), std::domain_error);
}

TEST_CASE("intensity values") {
  CHECK(intensity(1).w == 1);
  CHECK(intensity(2).w == 3);
  CHECK(intensity(3).w == 8);
  CHECK(intensity(4).w == 12);
  CHECK(intensity(6).w == 24);
  CHECK(intensity(12).w == 96);
  CHECK(intensity(30).w == 576);
  CHECK(intensity(97).w == 9408);
  CHECK(intensity(1024).w == 786432);
  CHECK(intensity(kMaxIntensityArgument).w == 15686516202006380544ull);
  CHECK(intensity(12).as_double() == 96.0);
}

TEST_CASE("intensity domain") {
  CHECK_THROWS_AS(intensity(0), std::domain_error);
  CHECK_THROWS_AS(intensity(kMaxIntensityArgument + 1), std::overflow_error);
}

TEST_CASE("prime power intensity exceeds half the square") {
  for (std::size_t k = 1; k <= 2000; ++k) {
    const std::uint64_t q = prime_power_seq(k).value;
    CHECK(2 * intensity(q).w > q * q);
  }
}

TEST_CASE("divisors and partition identity") {
  CHECK(prime_divisors(360) == std::vector<std::uint64_t>{2, 3, 5});
  CHECK(prime_divisors(1).empty());
  CHECK(prime_divisors(4294967291ull) == std::vector<std::uint64_t>{4294967291ull});
  CHECK(divisors(12) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
  for (std::uint64_t n = 1; n <= 3000; ++n) REQUIRE(verify_partition(n));
  CHECK(verify_partition(4294967295ull));
}
