#include "pcurve/construction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pcurve/admissible.hpp"

namespace pcurve {

namespace {

constexpr double kDecrementFloor = -1e-12;
constexpr double kDecrementSlack = 1e-9;
constexpr double kTurnTolerance = 1e-12;

std::size_t pick_cumulative(const std::vector<double>& cumulative, SeededGenerator& rng) {
  const double target = rng.uniform01() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace

double a_schedule(std::size_t n, double ell) {
  if (!(ell > 0.0)) return 0.0;
  if (n <= 2) return 0.5 * ell;
  const double dn = static_cast<double>(n);
  return 2.0 * ell / (dn * std::pow(std::log(dn), 1.5));
}

Construction::Construction(const Triangle& root, SeededGenerator rng, StepOptions options)
    : pair_(InscribedChainPair::initial(root)), rng_(rng), options_(options) {
  wedge_ids_.push_back(0);
  lineage_.push_back(WedgeLife{0, std::nullopt, 1, 0, pair_.wedges().front().longest_side()});
}

StepPreview Construction::preview() const {
  StepPreview p;
  p.n = n_;
  p.q = prime_power_seq(n_);
  p.w = intensity(p.q.value);
  p.intensity = options_.intensity_override.value_or(p.w.as_double()) * options_.intensity_scale;
  p.a_n = a_schedule(n_, pair_.ell());
  for (const Wedge& w : pair_.wedges()) p.exact_s += admissible_area(w, p.a_n);
  p.miss_probability = std::exp(-p.intensity * p.exact_s);
  return p;
}

StepRecord Construction::step() {
  const std::size_t n = n_;
  const auto& wedges = pair_.wedges();

  StepRecord rec;
  rec.n = n;
  rec.q = prime_power_seq(n);
  rec.w = intensity(rec.q.value);
  rec.intensity = options_.intensity_override.value_or(rec.w.as_double()) * options_.intensity_scale;
  rec.ell_before = pair_.ell();
  rec.a_n = a_schedule(n, rec.ell_before);
  if (!(rec.a_n > 0.0)) throw ConstructionError(n, "affine length collapsed to zero");

  cumulative_.clear();
  cumulative_.reserve(wedges.size());
  double band_total = 0.0;
  for (const Wedge& w : wedges) {
    band_total += admissible_area(w, rec.a_n);
    cumulative_.push_back(band_total);
  }
  rec.exact_s = band_total;

  const PoissonBatch batch = sample_in_wedges(rec.intensity, wedges, rng_);
  rec.poisson_count = batch.points.size();

  std::vector<std::pair<std::size_t, InsertionPoints>> admissible;
  for (std::size_t k = 0; k < batch.points.size(); ++k) {
    const std::size_t i = batch.wedge[k];
    if (auto ins = is_admissible(wedges[i], batch.points[k], rec.a_n))
      admissible.emplace_back(i, *ins);
  }
  rec.admissible_count = admissible.size();

  InsertionPoints chosen;
  if (!admissible.empty()) {
    const auto& pick = admissible[rng_.index(admissible.size())];
    rec.hit = true;
    rec.wedge = pick.first;
    chosen = pick.second;
  } else {
    rec.wedge = pick_cumulative(cumulative_, rng_);
    chosen = sample_admissible(wedges[rec.wedge], rec.a_n, rng_);
  }

  try {
    rec.decrement = pair_.insert(rec.wedge, chosen.q, chosen.p, chosen.r);
  } catch (const std::exception& e) {
    throw ConstructionError(n, e.what());
  }
  rec.ell_after = pair_.ell();
  if (rec.decrement < kDecrementFloor || rec.decrement > rec.a_n + kDecrementSlack)
    throw ConstructionError(n, "decrement " + std::to_string(rec.decrement) +
                                   " outside [0, a_n = " + std::to_string(rec.a_n) + "]");
  check_local_convexity(rec.wedge);

  // Lineage: the split wedge dies, two children are born into state n + 1.
  const std::uint64_t parent = wedge_ids_[rec.wedge];
  lineage_[parent].split = n;
  const std::uint64_t left = lineage_.size();
  const std::uint64_t right = left + 1;
  lineage_.push_back(WedgeLife{left, parent, n + 1, 0, pair_.wedges()[rec.wedge].longest_side()});
  lineage_.push_back(
      WedgeLife{right, parent, n + 1, 0, pair_.wedges()[rec.wedge + 1].longest_side()});
  wedge_ids_[rec.wedge] = left;
  wedge_ids_.insert(wedge_ids_.begin() + static_cast<std::ptrdiff_t>(rec.wedge) + 1, right);

  ++n_;
  return rec;
}

void Construction::check_local_convexity(std::size_t wedge_index) const {
  // The new inner vertex sits at inner index wedge_index + 1; check the turns
  // at it and at both neighbours.
  const auto& wedges = pair_.wedges();
  const auto vertex = [&](std::size_t k) { return k == 0 ? pair_.root().a : wedges[k - 1].c_next; };
  const std::size_t last = wedges.size();  // inner vertices are 0..last
  const double expected = pair_.root().doubled_area() > 0 ? 1.0 : -1.0;
  const std::size_t centre = wedge_index + 1;
  for (std::size_t k = (centre > 1 ? centre - 1 : 1); k <= std::min(centre + 1, last - 1); ++k) {
    const Vec2 u = vertex(k) - vertex(k - 1);
    const Vec2 v = vertex(k + 1) - vertex(k);
    const double turn = cross(u, v);
    // The chain bends toward the apex: same sign as S(A, B, C) = AC x CB.
    if (!(expected * turn > kTurnTolerance * norm(u) * norm(v)))
      throw ConstructionError(n_, "inner chain lost strict convexity at vertex " + std::to_string(k));
  }
}

std::size_t RunSummary::hit_total() const {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [](const StepRecord& r) { return r.hit; }));
}

RunSummary run(const RunConfig& config) {
  if (config.horizon < 1) throw std::invalid_argument("run: horizon must be >= 1");
  Construction c(config.root, SeededGenerator(config.seed, config.stream), config.options);
  RunSummary summary;
  summary.seed = config.seed;
  summary.stream = config.stream;
  summary.steps.reserve(config.horizon);
  summary.ell_trajectory.reserve(config.horizon + 1);
  summary.ell_trajectory.push_back(c.pair().ell());
  for (std::size_t k = 0; k < config.horizon; ++k) {
    StepRecord rec = c.step();
    if (rec.hit) ++summary.hits_by_prime_power[rec.q.value];
    summary.ell_trajectory.push_back(rec.ell_after);
    summary.steps.push_back(std::move(rec));
  }
  summary.final_pair = c.pair();
  summary.lineage = c.lineage();
  return summary;
}

double CensusReport::fraction_older_than(double age) const {
  if (ages.empty()) return 0.0;
  const auto older = std::count_if(ages.begin(), ages.end(),
                                   [age](std::size_t a) { return static_cast<double>(a) > age; });
  return static_cast<double>(older) / static_cast<double>(ages.size());
}

CensusReport wedge_split_census(const RunSummary& summary) {
  CensusReport report;
  report.horizon = summary.steps.size();
  for (const WedgeLife& life : summary.lineage) {
    std::size_t age = 0;
    if (life.split != 0) {
      age = life.split - life.born + 1;
      ++report.split_count;
    } else {
      age = report.horizon + 1 - life.born;
      ++report.alive_count;
    }
    report.ages.push_back(age);
    ++report.histogram[age];
    report.max_age = std::max(report.max_age, age);
  }
  return report;
}

std::vector<Triangle> circle_wedges(Point center, double radius, std::size_t count) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle_wedges: radius must be positive");
  std::vector<Triangle> out;
  out.reserve(count);
  const auto angle = [](std::size_t i) { return std::numbers::pi / std::ldexp(1.0, static_cast<int>(i) + 1); };
  const auto on_circle = [&](double theta) {
    return center + radius * Vec2{std::cos(theta), std::sin(theta)};
  };
  for (std::size_t i = 1; i <= count; ++i) {
    const double from = angle(i), to = angle(i + 1);
    const double mid = 0.5 * (from + to), half = 0.5 * (from - to);
    // Tangents at the chord endpoints meet on the bisector at radius / cos(half).
    const Point apex = center + (radius / std::cos(half)) * Vec2{std::cos(mid), std::sin(mid)};
    out.push_back(Triangle{on_circle(from), on_circle(to), apex});
  }
  return out;
}

namespace {

// Smallest n whose tail sum of miss probabilities over the pilot horizon
// stays below budget; horizon + 1 if none does.
std::size_t start_offset(const RunSummary& pilot, double budget) {
  const auto& steps = pilot.steps;
  double tail = 0.0;
  std::size_t offset = steps.size() + 1;
  for (std::size_t k = steps.size(); k-- > 0;) {
    tail += std::exp(-steps[k].intensity * steps[k].exact_s);
    if (tail >= budget) break;
    offset = steps[k].n;
  }
  return offset;
}

}  // namespace

TheoremResult assemble_theorem_curve(const TheoremConfig& config) {
  if (config.wedges < 1) throw std::invalid_argument("theorem: need at least one wedge");
  if (config.horizon < 1) throw std::invalid_argument("theorem: horizon must be >= 1");
  TheoremResult result;
  result.triangles = circle_wedges(config.center, config.radius, config.wedges);
  result.hits_per_step.assign(config.horizon, 0);

  for (std::size_t i = 0; i < config.wedges; ++i) {
    // Thin far-off wedges lose precision in absolute coordinates; simulate in
    // the canonical frame with the intensity rescaled by the area ratio.
    const Triangle& wedge = result.triangles[i];
    const AffineMap back = canonical_map(wedge).inverse();
    RunConfig rc;
    rc.root = kCanonicalTriangle;
    rc.horizon = config.horizon;
    rc.seed = config.seed;
    rc.stream = stream_id(config.trial, i + 1);
    rc.options = config.options;
    rc.options.intensity_scale *= wedge.plain_area() / kCanonicalTriangle.plain_area();

    std::size_t offset = 1;
    if (config.policy == StartPolicy::pilot) {
      RunConfig pilot = rc;
      pilot.stream = stream_id(config.trial, (i + 1) | 0x80000);
      offset = start_offset(run(pilot), config.epsilon0 / std::ldexp(1.0, static_cast<int>(i) + 1));
    }

    RunSummary summary;
    try {
      summary = run(rc);
    } catch (const ConstructionError& e) {
      throw ConstructionError(e.step(), "wedge " + std::to_string(i + 1) + ": " + e.what());
    }
    for (const StepRecord& rec : summary.steps)
      if (rec.hit && rec.n >= offset) ++result.hits_per_step[rec.n - 1];

    InscribedChainPair pair = summary.final_pair.mapped(back);
    // Pin the shared chord endpoints so neighbouring wedges glue exactly.
    auto inner = pair.inner();
    inner.front() = wedge.a;
    inner.back() = wedge.b;
    result.curve.insert(result.curve.end(), inner.begin() + (i == 0 ? 0 : 1), inner.end());
    result.start_offsets.push_back(offset);
    result.pairs.push_back(std::move(pair));
    result.runs.push_back(std::move(summary));
  }
  result.convex = is_strictly_convex(result.curve);
  return result;
}

}  // namespace pcurve
