#include "pcurve/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "pcurve/admissible.hpp"
#include "pcurve/experiments.hpp"
#include "pcurve/render.hpp"

namespace pcurve {

double length_floor(std::size_t n) {
  double c = 1.0;
  for (std::size_t k = 1; k + 1 <= n && k <= 2; ++k) c *= 0.5;
  for (std::size_t k = 3; k < n; ++k) c *= 1.0 - a_fraction(k);
  return c;
}

double chi_square_critical(std::size_t dof, double level) {
  if (dof == 0 || !(level > 0.0 && level < 1.0))
    throw std::invalid_argument("chi_square_critical: need dof >= 1 and 0 < level < 1");
  // Upper normal quantile by bisection on the tail.
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(mid / std::sqrt(2.0)) > level ? lo : hi) = mid;
  }
  const double z = 0.5 * (lo + hi);
  const double d = static_cast<double>(dof);
  const double h = 2.0 / (9.0 * d);
  return d * std::pow(1.0 - h + z * std::sqrt(h), 3);
}

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

CheckResult named(std::string id, std::string name) {
  CheckResult r;
  r.id = std::move(id);
  r.name = std::move(name);
  return r;
}

std::size_t scaled(std::size_t n, double scale, std::size_t floor) {
  const auto v = static_cast<std::size_t>(std::llround(static_cast<double>(n) * scale));
  return std::max(v, floor);
}

// Independent stream per check, away from trial and replay ranges.
SeededGenerator check_rng(const ExperimentConfig& config, std::uint64_t check) {
  return SeededGenerator(config.seed, (std::uint64_t{1} << 61) | check);
}

Triangle random_triangle(SeededGenerator& rng) {
  for (;;) {
    Triangle t{{rng.uniform(-1, 1), rng.uniform(-1, 1)},
               {rng.uniform(-1, 1), rng.uniform(-1, 1)},
               {rng.uniform(-1, 1), rng.uniform(-1, 1)}};
    if (std::abs(t.doubled_area()) > 1e-3) return t;
  }
}

// Wedge of a fresh pair on a random root, plus an alpha spread over four
// decades of alpha / S^{1/3}.
struct Config {
  InscribedChainPair pair;
  Wedge wedge;
  double alpha;
};

Config random_config(SeededGenerator& rng) {
  Config c{InscribedChainPair::initial(random_triangle(rng)), {}, 0.0};
  c.wedge = c.pair.wedges().front();
  c.alpha = std::pow(10.0, rng.uniform(-4.0, 0.5)) * std::cbrt(c.wedge.s);
  return c;
}

struct Context {
  std::vector<RunSummary> floor_runs;
  RunSummary lineage_run;
  std::vector<TheoremResult> theorem_runs;
};

CheckResult amgm_identity(const ExperimentConfig& cfg) {
  CheckResult r = named("C1", "AM-GM expansion identity");
  SeededGenerator rng = check_rng(cfg, 1);
  const std::size_t count = scaled(checks::kAmgmTriples, cfg.sample_scale, 1000);
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double v[3];
    for (double& x : v) x = rng.uniform01() * std::pow(10.0, rng.uniform(-3.0, 3.0));
    if (i % 10 == 0) v[i / 10 % 3] = 0.0;
    const double rel = amgm_expansion_residual(v[0], v[1], v[2]) / std::max({1.0, v[0], v[1], v[2]});
    worst = std::max(worst, rel);
  }
  r.measured = worst;
  r.tolerance = checks::kAmgmRelTol * cfg.tolerance_scale;
  r.passed = worst <= r.tolerance;
  r.detail = fmt("%.0f triples, max residual / max(1,x,y,z) = %.3e", static_cast<double>(count), worst);
  return r;
}

CheckResult err_nonnegative(const ExperimentConfig& cfg) {
  CheckResult r = named("C2", "err(P,Q,R) nonnegative");
  SeededGenerator rng = check_rng(cfg, 2);
  const std::size_t count = scaled(checks::kErrConfigs, cfg.sample_scale, 1000);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const Triangle t = random_triangle(rng);
    const Point p = lerp(t.a, t.c, rng.uniform_open01());
    const Point rr = lerp(t.b, t.c, rng.uniform_open01());
    const Point q = lerp(p, rr, rng.uniform_open01());
    const double s = std::abs(t.doubled_area());
    const double e = err(s, std::abs(doubled_area(t.a, q, p)), std::abs(doubled_area(t.b, q, rr)));
    worst = std::min(worst, e);
  }
  r.measured = worst;
  r.tolerance = -checks::kErrFloor * cfg.tolerance_scale;
  r.passed = worst >= r.tolerance;
  r.detail = fmt("%.0f configurations, min err = %.3e", static_cast<double>(count), worst);
  return r;
}

CheckResult band_area(const ExperimentConfig& cfg) {
  CheckResult r = named("C3", "admissible band area vs Monte Carlo");
  SeededGenerator rng = check_rng(cfg, 3);
  const std::size_t count = scaled(checks::kAreaSamples, cfg.sample_scale, 10000);
  const Wedge w = InscribedChainPair::initial(random_triangle(rng)).wedges().front();
  double worst = 0.0;
  std::string detail;
  for (double ratio : {0.01, 0.1, 1.0}) {
    const double alpha = ratio * std::cbrt(w.s);
    const double p = admissible_area(w, alpha) / w.plain_area();
    std::size_t inside = 0;
    for (std::size_t i = 0; i < count; ++i)
      if (is_admissible(w, uniform_in_triangle(w.c_prev, w.apex, w.c_next, rng), alpha)) ++inside;
    const double freq = static_cast<double>(inside) / static_cast<double>(count);
    const double z = std::abs(freq - p) / std::sqrt(p * (1.0 - p) / static_cast<double>(count));
    worst = std::max(worst, z);
    detail += fmt("ratio %g: exact %.6f MC %.6f; ", ratio, p, freq);
  }
  r.measured = worst;
  r.tolerance = checks::kSigmas * cfg.tolerance_scale;
  r.passed = worst <= r.tolerance;
  r.detail = detail + fmt("%.0f points per ratio; max |z| = %.3f", static_cast<double>(count), worst);
  return r;
}

CheckResult soundness(const ExperimentConfig& cfg) {
  CheckResult r = named("C4", "admissibility soundness");
  SeededGenerator rng = check_rng(cfg, 4);
  const std::size_t count = scaled(checks::kSoundnessTriples, cfg.sample_scale, 1000);
  double worst_dec = -std::numeric_limits<double>::infinity();
  double worst_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    Config c = random_config(rng);
    const InsertionPoints ins = sample_admissible(c.wedge, c.alpha, rng);
    for (double x : insertion_ratios(c.wedge, ins))
      worst_ratio = std::max({worst_ratio, 0.125 - x, x - 0.875});
    worst_dec = std::max(worst_dec, c.pair.insert(0, ins.q, ins.p, ins.r) - c.alpha);
  }
  r.measured = worst_dec;
  r.tolerance = checks::kDecrementSlack * cfg.tolerance_scale;
  r.passed = worst_dec <= r.tolerance && worst_ratio <= checks::kSegmentSlack * cfg.tolerance_scale;
  r.detail = fmt("%.0f triples; max decrement - alpha = %.3e; max ratio excursion past [1/8,7/8] = %.3e",
                 static_cast<double>(count), worst_dec, worst_ratio);
  return r;
}

CheckResult segment_bound(const ExperimentConfig& cfg, Context& ctx) {
  CheckResult r = named("C5", "segment shrinkage 399/400");
  SeededGenerator rng = check_rng(cfg, 5);
  const std::size_t count = scaled(checks::kSegmentConfigs, cfg.sample_scale, 1000);
  const double slack = checks::kSegmentSlack * cfg.tolerance_scale;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const Config c = random_config(rng);
    const InsertionPoints ins = sample_admissible(c.wedge, c.alpha, rng);
    const Triangle t = c.wedge.as_triangle();
    const double bound = kShrinkFactor * t.longest_side();
    for (double len : {distance(t.a, ins.p), distance(ins.p, ins.q), distance(ins.q, ins.r),
                       distance(ins.r, t.b), distance(t.a, ins.q), distance(ins.q, t.b)})
      worst = std::max(worst, len - bound);
  }
  const double sampled = worst;

  RunConfig rc;
  rc.horizon = scaled(checks::kLineageHorizon, cfg.sample_scale, 100);
  rc.seed = cfg.seed;
  rc.stream = stream_id(0);
  rc.options.intensity_override = cfg.intensity_override;
  ctx.lineage_run = run(rc);
  const auto& lineage = ctx.lineage_run.lineage;
  for (const WedgeLife& life : lineage)
    if (life.parent)
      worst = std::max(worst, life.longest_side - kShrinkFactor * lineage[*life.parent].longest_side);

  r.measured = worst;
  r.tolerance = slack;
  r.passed = worst <= slack;
  r.detail = fmt("%.0f configurations, max excess %.3e; lineage over %.0f steps, overall max excess ",
                 static_cast<double>(count), sampled, static_cast<double>(rc.horizon)) +
             fmt("%.3e", worst);
  return r;
}

CheckResult length_floor_check(const ExperimentConfig& cfg, Context& ctx) {
  CheckResult r = named("C6", "affine-length floor");
  const std::size_t n = checks::kFloorHorizon;
  const std::size_t seeds = scaled(checks::kFloorSeeds, cfg.sample_scale, 2);
  const double c_star = length_floor(n);
  ctx.floor_runs = parallel_map<RunSummary>(seeds, cfg.threads, [&](std::size_t k) {
    RunConfig rc;
    rc.horizon = n;
    rc.seed = cfg.seed + k;
    rc.stream = stream_id(0);
    rc.options.intensity_override = cfg.intensity_override;
    return run(rc);
  });
  double worst = std::numeric_limits<double>::infinity();
  for (const RunSummary& s : ctx.floor_runs)
    worst = std::min(worst, s.ell_trajectory[n - 1] / s.ell_trajectory[0]);
  r.measured = worst - c_star;
  r.tolerance = -checks::kFloorSlack * cfg.tolerance_scale;
  r.passed = r.measured >= r.tolerance;
  r.detail = fmt("N = %.0f, %.0f seeds, C* = %.6f, ", static_cast<double>(n), static_cast<double>(seeds),
                 c_star) +
             fmt("min ell_N / ell_1 = %.6f", worst);
  return r;
}

CheckResult decrement_contract(const Context& ctx) {
  CheckResult r = named("C7", "per-step decrement contract");
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t steps = 0;
  const auto scan = [&](const RunSummary& s) {
    for (const StepRecord& rec : s.steps) {
      const double d = rec.ell_before - rec.ell_after;
      worst = std::max({worst, -d - checks::kDecrementFloor, d - rec.a_n - checks::kDecrementSlack});
      ++steps;
    }
  };
  for (const RunSummary& s : ctx.floor_runs) scan(s);
  scan(ctx.lineage_run);
  for (const TheoremResult& t : ctx.theorem_runs)
    for (const RunSummary& s : t.runs) scan(s);
  r.measured = worst;
  r.tolerance = 0.0;
  r.passed = worst <= 0.0;
  r.detail = fmt("%.0f steps; max violation beyond the slack = %.3e", static_cast<double>(steps), worst);
  return r;
}

CheckResult miss_law(const ExperimentConfig& cfg) {
  CheckResult r = named("C8", "miss-probability law");
  ExperimentConfig c = cfg;
  c.replays = scaled(cfg.replays, cfg.sample_scale, 50);
  const auto rows = estimate_miss_rate(c, cfg.miss_steps);
  double worst = 0.0;
  std::string detail = std::to_string(c.replays) + " replays;";
  for (const MissRateRow& row : rows) {
    const double z = row.sigma > 0.0 ? std::abs(row.miss_rate - row.p_exact) / row.sigma
                                     : (row.miss_rate == row.p_exact ? 0.0
                                                                      : std::numeric_limits<double>::infinity());
    worst = std::max(worst, z);
    detail += fmt(" n=%.0f P=%.4f emp=%.4f", static_cast<double>(row.n), row.p_exact, row.miss_rate);
  }
  r.measured = worst;
  r.tolerance = checks::kSigmas * cfg.tolerance_scale;
  r.passed = worst <= r.tolerance;
  r.detail = detail + fmt("; max |z| = %.3f", worst);
  return r;
}

CheckResult theorem_trend(const ExperimentConfig& cfg, Context& ctx) {
  CheckResult r = named("C9", "theorem hit trend and global convexity");
  const std::size_t trials = scaled(checks::kTheoremTrials, cfg.sample_scale, 4);
  ctx.theorem_runs = parallel_map<TheoremResult>(trials, cfg.threads, [&](std::size_t t) {
    TheoremConfig tc = theorem_config(cfg, t);
    tc.wedges = checks::kTheoremWedges;
    tc.horizon = checks::kTheoremHorizon;
    return assemble_theorem_curve(tc);
  });
  double early = 0.0, late = 0.0;
  std::size_t convex = 0;
  for (const TheoremResult& res : ctx.theorem_runs) {
    for (std::size_t n = 1; n <= 50; ++n) early += static_cast<double>(res.hits_per_step[n - 1]);
    for (std::size_t n = 300; n <= 400; ++n) late += static_cast<double>(res.hits_per_step[n - 1]);
    if (res.convex) ++convex;
  }
  early /= 50.0 * static_cast<double>(trials);
  late /= 101.0 * static_cast<double>(trials);
  r.measured = late - early;
  r.tolerance = 0.0;
  r.passed = late > early && convex == trials;
  r.detail = fmt("%.0f trials; mean hits/step n in [1,50] = %.4f, n in [300,400] = %.4f",
                 static_cast<double>(trials), early, late) +
             "; convex " + std::to_string(convex) + "/" + std::to_string(trials);
  return r;
}

CheckResult number_theory(const ExperimentConfig&) {
  CheckResult r = named("C10", "prime powers and intensities");
  const std::size_t limit = checks::kPartitionLimit;
  std::size_t failures = 0;
  for (std::uint64_t n = 1; n <= limit; ++n)
    if (!verify_partition(n)) ++failures;

  // Plain sieve up to a bound that holds more than `limit` prime powers.
  const std::uint64_t bound = 200000;
  std::vector<bool> composite(bound + 1, false);
  std::vector<std::uint64_t> powers;
  for (std::uint64_t p = 2; p <= bound; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t m = p * p; m <= bound; m += p) composite[m] = true;
    for (std::uint64_t v = p; v <= bound; v *= p) powers.push_back(v);
  }
  std::sort(powers.begin(), powers.end());
  for (std::size_t k = 1; k <= limit; ++k)
    if (prime_power_seq(k).value != powers[k - 1]) ++failures;

  for (std::uint64_t q : powers) {
    if (q > limit) break;
    if (!(2 * intensity(q).w > q * q)) ++failures;
  }
  r.measured = static_cast<double>(failures);
  r.tolerance = 0.0;
  r.passed = failures == 0;
  r.detail = std::to_string(failures) + " mismatches over n, k <= " + std::to_string(limit);
  return r;
}

// Cell of point x in the k x k subdivision of triangle (a, b, c) into k^2
// equal-area triangles.
std::size_t triangle_cell(Point a, Point b, Point c, Point x, std::size_t k) {
  const Vec2 e1 = b - a, e2 = c - a, d = x - a;
  const double det = cross(e1, e2);
  const double u = std::clamp(cross(d, e2) / det, 0.0, 1.0) * static_cast<double>(k);
  const double v = std::clamp(cross(e1, d) / det, 0.0, 1.0) * static_cast<double>(k);
  auto i = std::min(static_cast<std::size_t>(u), k - 1);
  auto j = std::min(static_cast<std::size_t>(v), k - 1 - i);
  const bool upper = (u - static_cast<double>(i)) + (v - static_cast<double>(j)) > 1.0 && i + j + 1 < k;
  // Row i holds 2(k - i) - 1 cells: lower triangles at even, upper at odd slots.
  std::size_t offset = 0;
  for (std::size_t row = 0; row < i; ++row) offset += 2 * (k - row) - 1;
  return offset + 2 * j + (upper ? 1 : 0);
}

CheckResult poisson_sampler(const ExperimentConfig& cfg) {
  CheckResult r = named("C11", "Poisson sampler");
  SeededGenerator rng = check_rng(cfg, 11);
  const std::size_t draws = scaled(checks::kPoissonDraws, cfg.sample_scale, 10000);
  double worst_z = 0.0, worst_var = 0.0;
  std::string detail;
  for (double mean : {0.5, 5.0, 50.0}) {
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
      const double x = static_cast<double>(poisson_count(mean, rng));
      sum += x;
      sum2 += x * x;
    }
    const double dn = static_cast<double>(draws);
    const double m = sum / dn;
    const double var = (sum2 - dn * m * m) / (dn - 1.0);
    worst_z = std::max(worst_z, std::abs(m - mean) / std::sqrt(mean / dn));
    worst_var = std::max(worst_var, std::abs(var / mean - 1.0));
    detail += fmt("mean %g: m=%.4f var=%.4f; ", mean, m, var);
  }

  // Two wedges of plain area 2 and 1, 100 equal-area cells each.
  const std::vector<Wedge> wedges{Wedge::make({-1, 1}, {0, -1}, {1, 1}),
                                  Wedge::make({2, 0}, {3, 0}, {2, 2})};
  const std::size_t k = 10;
  const double total_area = wedges[0].plain_area() + wedges[1].plain_area();
  const PoissonBatch batch = sample_in_wedges(static_cast<double>(draws) / total_area, wedges, rng);
  std::vector<double> observed(2 * k * k, 0.0);
  for (std::size_t i = 0; i < batch.points.size(); ++i) {
    const Wedge& w = wedges[batch.wedge[i]];
    observed[batch.wedge[i] * k * k + triangle_cell(w.c_prev, w.apex, w.c_next, batch.points[i], k)] += 1.0;
  }
  const double total = static_cast<double>(batch.points.size());
  double chi2 = 0.0;
  for (std::size_t cell = 0; cell < observed.size(); ++cell) {
    const double expected = total * wedges[cell / (k * k)].plain_area() / total_area / static_cast<double>(k * k);
    chi2 += (observed[cell] - expected) * (observed[cell] - expected) / expected;
  }
  const double critical = chi_square_critical(observed.size() - 1, checks::kChiSquareLevel);

  r.measured = worst_z;
  r.tolerance = checks::kSigmas * cfg.tolerance_scale;
  r.passed = worst_z <= r.tolerance && worst_var <= checks::kVarianceRelTol * cfg.tolerance_scale &&
             chi2 <= critical;
  r.detail = detail + fmt("max |z| = %.3f, max var rel err = %.4f; ", worst_z, worst_var) +
             fmt("chi2 = %.2f vs critical %.2f (%.0f points)", chi2, critical, total);
  return r;
}

CheckResult determinism(const ExperimentConfig& cfg) {
  CheckResult r = named("C12", "determinism");
  ExperimentConfig c = cfg;
  c.horizon = std::min<std::size_t>(cfg.horizon, 200);
  c.trials = 2;
  c.sweep_horizons.clear();
  c.sweep_seeds.clear();
  std::size_t mismatches = 0;
  if (sweep_in_memory(c).csv != sweep_in_memory(c).csv) ++mismatches;

  TheoremConfig tc = theorem_config(c, 0);
  tc.horizon = 100;
  tc.wedges = 4;
  const TheoremResult a = assemble_theorem_curve(tc), b = assemble_theorem_curve(tc);
  for (std::size_t i = 0; i < a.pairs.size(); ++i)
    if (a.pairs[i].to_json().dump() != b.pairs[i].to_json().dump()) ++mismatches;
  if (render_theorem_svg(a, tc.center, tc.radius) != render_theorem_svg(b, tc.center, tc.radius)) ++mismatches;
  r.measured = static_cast<double>(mismatches);
  r.tolerance = 0.0;
  r.passed = mismatches == 0;
  r.detail = std::to_string(mismatches) + " differing payloads (sweep CSV, pair JSON, SVG)";
  return r;
}

}  // namespace

Report verify_lemma_suite(const ExperimentConfig& config) {
  config.validate();
  Report report;
  report.title = "verify";
  report.seed = config.seed;
  report.config = to_json(config);
  Context ctx;

  const auto timed = [](auto&& fn) {
    const auto start = Clock::now();
    CheckResult r = fn();
    r.runtime_s = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
  };
  report.checks.push_back(timed([&] { return amgm_identity(config); }));
  report.checks.push_back(timed([&] { return err_nonnegative(config); }));
  report.checks.push_back(timed([&] { return band_area(config); }));
  report.checks.push_back(timed([&] { return soundness(config); }));
  report.checks.push_back(timed([&] { return segment_bound(config, ctx); }));
  report.checks.push_back(timed([&] { return length_floor_check(config, ctx); }));
  CheckResult c8 = timed([&] { return miss_law(config); });
  CheckResult c9 = timed([&] { return theorem_trend(config, ctx); });
  // C7 audits every run produced above.
  report.checks.push_back(timed([&] { return decrement_contract(ctx); }));
  report.checks.push_back(std::move(c8));
  report.checks.push_back(std::move(c9));
  report.checks.push_back(timed([&] { return number_theory(config); }));
  report.checks.push_back(timed([&] { return poisson_sampler(config); }));
  report.checks.push_back(timed([&] { return determinism(config); }));
  return report;
}

}  // namespace pcurve
