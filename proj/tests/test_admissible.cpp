#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pcurve/admissible.hpp"

using namespace pcurve;

namespace {

Wedge canonical_wedge() { return InscribedChainPair::initial(kCanonicalTriangle).wedges().front(); }

}  // namespace

TEST_CASE("err values") {
  CHECK(err(8.0, 1.0, 1.0) == doctest::Approx(0.0));
  CHECK(err(4.0, 0.5, 0.5) == doctest::Approx(1.0 - 2.0 * std::cbrt(0.125)));
  CHECK_THROWS_AS(err(0.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("AM-GM expansion residual") {
  CHECK(amgm_expansion_residual(1, 1, 1) == doctest::Approx(0.0));
  CHECK(amgm_expansion_residual(8, 27, 0) < 1e-12 * 27);
  CHECK(amgm_expansion_residual(1e6, 1e-6, 3) < 1e-12 * 1e6);
  CHECK_THROWS_AS(amgm_expansion_residual(-1, 1, 1), std::domain_error);
}

TEST_CASE("delta_for") {
  CHECK(delta_for(0.0, 4.0) == 0.0);
  CHECK(delta_for(-1.0, 4.0) == 0.0);
  CHECK(delta_for(1.0, 1.0) == 0.125);
  CHECK(delta_for(0.01, 1.0) == doctest::Approx(0.0125));
  CHECK(delta_for(100.0, 1.0) == 0.125);
  CHECK_THROWS_AS(delta_for(1.0, 0.0), std::domain_error);
}

TEST_CASE("band point ratios on the canonical wedge") {
  const Wedge w = canonical_wedge();
  const auto ins = band_point(w, 0.2, 0.05);
  CHECK(ins.q.x == doctest::Approx(0.2));
  CHECK(ins.q.y == doctest::Approx(0.04 + 0.05));
  const auto r = insertion_ratios(w, ins);
  CHECK(r[0] == doctest::Approx(0.6 - 0.05 / 2.4));  // AP:AC
  CHECK(r[2] == doctest::Approx(0.6 + 0.05 / 1.6));  // RC:BC
  CHECK(r[0] + r[3] == doctest::Approx(1.0));
  CHECK(r[1] + r[4] == doctest::Approx(1.0));
  CHECK(r[2] + r[5] == doctest::Approx(1.0));
  // P, Q, R collinear on the tangent-parallel line y = 2tx - t^2 + tau.
  for (Point x : {ins.p, ins.q, ins.r}) CHECK(x.y == doctest::Approx(0.4 * x.x - 0.04 + 0.05));
}

TEST_CASE("membership") {
  const Wedge w = canonical_wedge();
  const double alpha = std::cbrt(4.0);  // delta = 1/8
  CHECK(is_admissible(w, {0.0, 0.1}, alpha));
  CHECK(is_admissible(w, {0.5, 0.25 + 0.12}, alpha));
  CHECK_FALSE(is_admissible(w, {0.0, 0.2}, alpha));
  CHECK_FALSE(is_admissible(w, {0.6, 0.36}, alpha));
  CHECK(is_admissible(w, {0.0, 0.0}, 0.0));  // on the parabola the decrement is 0
  CHECK_FALSE(is_admissible(w, {0.0, 0.01}, 0.0));
  CHECK_FALSE(is_admissible(w, {0.0, 0.0}, -1.0));
  const auto ins = is_admissible(w, {0.1, 0.0}, alpha);
  REQUIRE(ins);
  CHECK(ins->q == Point{0.1, 0.0});
}

TEST_CASE("band area formula") {
  const Wedge w = Wedge::make({0, 0}, {3, 1}, {1, 2});
  const double alpha = 0.1 * std::cbrt(w.s);
  CHECK(admissible_area(w, alpha) == doctest::Approx(0.5 * delta_for(alpha, w.s) * w.s));
  const auto band = AdmissibleBand::of(w, alpha);
  CHECK(band.region_area == doctest::Approx(admissible_area(w, alpha)));
  CHECK(admissible_area(w, 0.0) == 0.0);
}

TEST_CASE("sampled band points are admissible and sound") {
  SeededGenerator rng(3, 0);
  for (int i = 0; i < 5000; ++i) {
    auto pair = InscribedChainPair::initial(
        Triangle{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, {rng.uniform(-1, 1), rng.uniform(-1, 1)},
                 {rng.uniform(-1, 1), rng.uniform(-1, 1)}});
    const Wedge w = pair.wedges().front();
    if (w.s < 1e-3) continue;
    const double alpha = std::pow(10.0, rng.uniform(-4, 0)) * std::cbrt(w.s);
    const auto ins = sample_admissible(w, alpha, rng);
    REQUIRE(is_admissible(w, ins.q, alpha));
    for (double x : insertion_ratios(w, ins)) {
      CHECK(x >= 0.125 - 1e-12);
      CHECK(x <= 0.875 + 1e-12);
    }
    CHECK(pair.insert(0, ins.q, ins.p, ins.r) <= alpha + 1e-9);
  }
  CHECK_THROWS_AS(sample_admissible(canonical_wedge(), 0.0, rng), std::domain_error);
}
