#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pcurve/config.hpp"
#include "pcurve/experiments.hpp"
#include "pcurve/render.hpp"
#include "pcurve/report.hpp"
#include "pcurve/verify.hpp"

using namespace pcurve;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pcurve_test_" + name);
  fs::remove_all(p);
  return p;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.mode = Mode::theorem;
  c.root = Triangle{{0, 0}, {2, 0}, {1, -3}};
  c.horizon = 77;
  c.seed = 123456789012345ull;
  c.start_policy = StartPolicy::pilot;
  c.intensity_override = 0.25;
  c.miss_steps = {4, 9};
  c.sweep_seeds = {1, 2, 3};
  const ExperimentConfig back = config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(back.seed == c.seed);
  CHECK(back.root.c == Point{1, -3});

  const fs::path dir = scratch("config");
  save_config(c, dir / "c.json");
  CHECK(to_json(load_config(dir / "c.json")) == to_json(c));
}

TEST_CASE("config overrides and validation") {
  ExperimentConfig c;
  apply_override(c, "horizon=40");
  apply_override(c, "start_policy=pilot");
  apply_override(c, "miss_steps=[2,3]");
  apply_override(c, "circle_center=[1.5,-2]");
  CHECK(c.horizon == 40);
  CHECK(c.start_policy == StartPolicy::pilot);
  CHECK(c.miss_steps == std::vector<std::size_t>{2, 3});
  CHECK(c.circle_center == Point{1.5, -2});
  CHECK_THROWS_AS(apply_override(c, "no_such_key=1"), std::invalid_argument);
  CHECK_THROWS(apply_override(c, "horizon"));
  CHECK_THROWS_AS(apply_override(c, "horizon=0"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(c, "circle_radius=-1"), std::invalid_argument);
  CHECK_THROWS(mode_from_string("draw"));
  CHECK(mode_from_string("sweep") == Mode::sweep);
}

TEST_CASE("sweep rows and re-ingest") {
  ExperimentConfig c;
  c.horizon = 3;
  c.trials = 1;
  SweepResult one = sweep_in_memory(c);
  CHECK(count(one.csv, "\n") == 4);

  c.horizon = 150;
  c.trials = 3;
  c.sweep_seeds = {4, 5};
  c.sweep_horizons = {50, 150};
  const fs::path dir = scratch("sweep");
  const SweepResult r = sweep(c, dir);
  CHECK(r.complete);
  CHECK(r.stats.size() == 12);
  const auto rows = read_sweep_csv(dir / "runs" / "sweep.csv");
  CHECK(rows.size() == 3 * 2 * (50 + 150));
  CHECK(trial_stats(rows) == r.stats);
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].trial == rows[i - 1].trial && rows[i].seed == rows[i - 1].seed &&
        rows[i].horizon == rows[i - 1].horizon)
      CHECK(rows[i].step.ell_after <= rows[i - 1].step.ell_after);

  // Hit totals agree with a direct run.
  const RunSummary direct = run(trial_config(c, 2, 150, 5));
  bool found = false;
  for (const TrialStats& st : r.stats)
    if (st.seed == 5 && st.horizon == 150 && st.trial == 2) {
      CHECK(st.hits == direct.hit_total());
      CHECK(st.ell_final == direct.ell_trajectory.back());
      found = true;
    }
  CHECK(found);

  std::ifstream manifest(dir / "runs" / "sweep.manifest.json");
  const auto m = nlohmann::json::parse(manifest);
  CHECK(m.at("complete") == true);
  CHECK(m.at("trials_written") == 12);
  CHECK_THROWS(parse_sweep_csv("bad,header\n"));
}

TEST_CASE("miss rate with zero intensity") {
  ExperimentConfig c;
  c.intensity_override = 0.0;
  c.replays = 100;
  const auto rows = estimate_miss_rate(c, {1, 4});
  REQUIRE(rows.size() == 2);
  for (const MissRateRow& row : rows) {
    CHECK(row.miss_rate == 1.0);
    CHECK(row.p_exact == 1.0);
    CHECK(row.sigma == 0.0);
  }
}

TEST_CASE("miss rate near one half") {
  // The state before step 1 does not depend on the intensity, so w can be
  // chosen to make w * exact_s = ln 2 there.
  ExperimentConfig c;
  const double s = frozen_state(c, 1).preview().exact_s;
  c.intensity_override = std::log(2.0) / s;
  c.replays = 4000;
  const auto rows = estimate_miss_rate(c, {1});
  CHECK(rows[0].p_exact == doctest::Approx(0.5));
  CHECK(std::abs(rows[0].miss_rate - 0.5) <= 3.0 * rows[0].sigma);
}

TEST_CASE("svg of the initial pair") {
  const auto pair = InscribedChainPair::initial(kCanonicalTriangle);
  RenderOptions ro;
  ro.band_alpha = std::cbrt(4.0);
  ro.title = "a < b";
  const std::string svg = render_svg(pair, ro);
  CHECK(svg == render_svg(pair, ro));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count(svg, "<polygon") == 2);  // root and one band
  CHECK(count(svg, "<polyline") == 2);  // outer and inner
  CHECK(count(svg, "stroke-dasharray") == 1);
  CHECK(svg.find("a &lt; b") != std::string::npos);
  ro.band_alpha.reset();
  ro.outer_chain = false;
  CHECK(count(render_svg(pair, ro), "<polyline") == 1);
  CHECK_THROWS(write_svg(svg, "/proc/pcurve/none.svg"));
}

TEST_CASE("report body excludes timings") {
  Report r;
  r.title = "t";
  r.checks.push_back({"C1", "x", true, 1.0, 2.0, "d", 3.5});
  CHECK(r.all_passed());
  CHECK(r.body().dump().find("3.5") == std::string::npos);
  CHECK(r.manifest().at("runtime_s").at("C1") == 3.5);
  r.checks.push_back({"C2", "y", false, 0.0, 0.0, "", 0.0});
  CHECK_FALSE(r.all_passed());
}

TEST_CASE("length floor oracle") {
  CHECK(length_floor(5000) == doctest::Approx(0.01048923254506051).epsilon(1e-12));
  CHECK(length_floor(3) == 0.25);
  CHECK(chi_square_critical(199, 1e-3) == doctest::Approx(266.386).epsilon(1e-3));
}

TEST_CASE("verify suite: small scale, determinism, zero tolerance") {
  ExperimentConfig c;
  c.sample_scale = 0.02;
  const Report a = verify_lemma_suite(c);
  REQUIRE(a.checks.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) CHECK(a.checks[i].id == "C" + std::to_string(i + 1));
  CHECK(a.body().dump() == verify_lemma_suite(c).body().dump());

  c.tolerance_scale = 0.0;
  const Report z = verify_lemma_suite(c);
  CHECK_FALSE(z.all_passed());
  CHECK_FALSE(z.checks[0].passed);
  CHECK(z.checks[0].measured > 0.0);
}
