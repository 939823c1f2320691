#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pcurve/admissible.hpp"
#include "pcurve/construction.hpp"

using namespace pcurve;

TEST_CASE("decrement schedule") {
  CHECK(a_schedule(1, 2.0) == 1.0);
  CHECK(a_schedule(2, 2.0) == 1.0);
  CHECK(a_schedule(3, 1.0) == doctest::Approx(2.0 / (3.0 * std::pow(std::log(3.0), 1.5))));
  CHECK(a_fraction(100) == doctest::Approx(0.0020236).epsilon(1e-4));
  CHECK(a_schedule(10, 0.0) == 0.0);
}

TEST_CASE("horizon one is deterministic") {
  RunConfig rc;
  rc.seed = 42;
  const RunSummary a = run(rc), b = run(rc);
  REQUIRE(a.steps.size() == 1);
  CHECK(a.steps[0].n == 1);
  CHECK(a.steps[0].q.value == 2);
  CHECK(a.steps[0].w.w == 3);
  CHECK(a.steps[0].poisson_count == b.steps[0].poisson_count);
  CHECK(a.final_pair.inner() == b.final_pair.inner());
  CHECK(a.final_pair.wedge_count() == 2);
  CHECK_THROWS_AS(run(RunConfig{kCanonicalTriangle, 0, 1, 0, {}}), std::invalid_argument);
}

TEST_CASE("run invariants") {
  RunConfig rc;
  rc.horizon = 600;
  rc.seed = 3;
  const RunSummary s = run(rc);
  REQUIRE(s.ell_trajectory.size() == 601);
  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    const StepRecord& r = s.steps[k];
    CHECK(r.n == k + 1);
    const double d = r.ell_before - r.ell_after;
    CHECK(d >= -1e-12);
    CHECK(d <= r.a_n + 1e-9);
    CHECK(r.exact_s > 0.0);
    CHECK(r.admissible_count <= r.poisson_count);
    CHECK(r.hit == (r.admissible_count > 0));
  }
  CHECK(s.final_pair.wedge_count() == 601);
  CHECK(is_strictly_convex(s.final_pair.inner()));
  CHECK(s.hit_total() > 0);
  std::size_t by_power = 0;
  for (const auto& [q, count] : s.hits_by_prime_power) by_power += count;
  CHECK(by_power == s.hit_total());
}

TEST_CASE("lineage shrinks by 399/400") {
  RunConfig rc;
  rc.horizon = 500;
  rc.seed = 8;
  const RunSummary s = run(rc);
  CHECK(s.lineage.size() == 1 + 2 * 500);
  for (const WedgeLife& life : s.lineage)
    if (life.parent) CHECK(life.longest_side <= kShrinkFactor * s.lineage[*life.parent].longest_side + 1e-12);
}

TEST_CASE("zero intensity never hits and still inserts") {
  RunConfig rc;
  rc.horizon = 50;
  rc.options.intensity_override = 0.0;
  const RunSummary s = run(rc);
  CHECK(s.hit_total() == 0);
  CHECK(s.final_pair.wedge_count() == 51);
}

TEST_CASE("preview matches the step it announces") {
  Construction c(kCanonicalTriangle, SeededGenerator(1, 0));
  for (int i = 0; i < 20; ++i) c.step();
  const StepPreview p = c.preview();
  const StepRecord r = c.step();
  CHECK(p.n == r.n);
  CHECK(p.exact_s == r.exact_s);
  CHECK(p.intensity == r.intensity);
  CHECK(p.miss_probability == doctest::Approx(std::exp(-r.intensity * r.exact_s)));
}

TEST_CASE("split census") {
  RunConfig rc;
  rc.seed = 5;
  const CensusReport one = wedge_split_census(run(rc));
  REQUIRE(one.ages.size() == 3);
  CHECK(one.ages[0] == 1);
  CHECK(one.split_count == 1);
  CHECK(one.alive_count == 2);

  rc.horizon = 300;
  const CensusReport big = wedge_split_census(run(rc));
  CHECK(big.split_count == 300);
  CHECK(big.alive_count == 301);
  // The two children of step N are born into state N + 1 and have age 0.
  CHECK(big.fraction_older_than(0.0) == doctest::Approx(1.0 - 2.0 / 601));
  CHECK(big.max_age <= 301);
}

TEST_CASE("tangent-chord wedges") {
  const auto wedges = circle_wedges({1, 2}, 3.0, 6);
  REQUIRE(wedges.size() == 6);
  for (std::size_t i = 0; i < wedges.size(); ++i) {
    const Triangle& t = wedges[i];
    CHECK(distance(t.a, {1, 2}) == doctest::Approx(3.0));
    CHECK(distance(t.b, {1, 2}) == doctest::Approx(3.0));
    // Apex sides are tangent: perpendicular to the radius.
    CHECK(dot(t.c - t.a, t.a - Point{1, 2}) == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
    CHECK(dot(t.c - t.b, t.b - Point{1, 2}) == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
    if (i > 0) CHECK(t.a == wedges[i - 1].b);
  }
  CHECK(std::atan2(wedges[0].a.y - 2, wedges[0].a.x - 1) == doctest::Approx(std::numbers::pi / 4));
  // Disjoint interiors: consecutive triangles lie in disjoint angular sectors.
  for (std::size_t i = 0; i + 1 < wedges.size(); ++i) {
    const Vec2 chord = wedges[i].b - Point{1, 2};
    CHECK(cross(chord, wedges[i].c - Point{1, 2}) > 0);
    CHECK(cross(chord, wedges[i + 1].c - Point{1, 2}) < 0);
  }
}

TEST_CASE("theorem assembly") {
  TheoremConfig tc;
  tc.horizon = 120;
  tc.wedges = 5;
  tc.radius = 4.0;
  const TheoremResult r = assemble_theorem_curve(tc);
  CHECK(r.convex);
  CHECK(r.curve.size() == 5 * 121 + 1);  // 121 wedges per run after 120 steps
  CHECK(r.curve.front() == r.triangles.front().a);
  CHECK(r.curve.back() == r.triangles.back().b);
  CHECK(r.start_offsets == std::vector<std::size_t>(5, 1));
  std::size_t hits = 0;
  for (const RunSummary& s : r.runs) hits += s.hit_total();
  std::size_t counted = 0;
  for (std::size_t h : r.hits_per_step) counted += h;
  CHECK(hits == counted);
}

TEST_CASE("one wedge is a run in the canonical frame") {
  TheoremConfig tc;
  tc.wedges = 1;
  tc.horizon = 80;
  tc.seed = 12;
  const TheoremResult r = assemble_theorem_curve(tc);
  RunConfig rc;
  rc.horizon = 80;
  rc.seed = 12;
  rc.stream = stream_id(0, 1);
  rc.options.intensity_scale = r.triangles[0].plain_area() / kCanonicalTriangle.plain_area();
  const RunSummary s = run(rc);
  CHECK(s.final_pair.inner() == r.runs[0].final_pair.inner());
  const auto mapped = s.final_pair.mapped(canonical_map(r.triangles[0]).inverse()).inner();
  REQUIRE(mapped.size() == r.curve.size());
  for (std::size_t i = 1; i + 1 < mapped.size(); ++i) CHECK(distance(mapped[i], r.curve[i]) < 1e-12);
}

TEST_CASE("pilot start offsets") {
  TheoremConfig tc;
  tc.horizon = 60;
  tc.wedges = 3;
  tc.policy = StartPolicy::pilot;
  tc.epsilon0 = 1e6;  // generous budget: every wedge starts early
  const TheoremResult r = assemble_theorem_curve(tc);
  for (std::size_t n : r.start_offsets) CHECK(n == 1);
  tc.epsilon0 = 1e-9;  // nothing qualifies within the horizon
  for (std::size_t n : assemble_theorem_curve(tc).start_offsets) CHECK(n == 61);
}
