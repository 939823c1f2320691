#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcurve/chain.hpp"
#include "pcurve/geometry.hpp"
#include "pcurve/pseudolattice.hpp"
#include "pcurve/sampler.hpp"

namespace pcurve {

// Decrement budget a_n: ell/2 for n <= 2, else 2 ell / (n (ln n)^{3/2}).
double a_schedule(std::size_t n, double ell);

// Step-n budget as a fraction of ell, i.e. a_schedule(n, 1).
inline double a_fraction(std::size_t n) { return a_schedule(n, 1.0); }

struct StepOptions {
  // Replaces w_{q_n} as the Poisson intensity (test and calibration hook).
  std::optional<double> intensity_override;
  // Multiplies the intensity. A run in an affine image of the true root uses
  // the plain-area ratio (true / image) here and is equal in law.
  double intensity_scale = 1.0;
};

struct StepRecord {
  std::size_t n = 0;
  PrimePower q;
  Intensity w;
  double intensity = 0.0;  // value actually used for sampling
  std::uint64_t poisson_count = 0;
  std::size_t admissible_count = 0;
  bool hit = false;
  std::size_t wedge = 0;  // index of the split wedge
  double a_n = 0.0;
  double decrement = 0.0;
  double exact_s = 0.0;  // sum of band areas at alpha = a_n
  double ell_before = 0.0;
  double ell_after = 0.0;
};

// Upcoming step without drawing any randomness.
struct StepPreview {
  std::size_t n = 0;
  PrimePower q;
  Intensity w;
  double intensity = 0.0;
  double a_n = 0.0;
  double exact_s = 0.0;
  double miss_probability = 1.0;  // exp(-intensity * exact_s)
};

struct WedgeLife {
  std::uint64_t id = 0;
  std::optional<std::uint64_t> parent;
  std::size_t born = 1;   // first state index containing the wedge
  std::size_t split = 0;  // step that split it; 0 while alive
  double longest_side = 0.0;
};

class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

// One trial of the inductive construction inside a root triangle.
class Construction {
 public:
  Construction(const Triangle& root, SeededGenerator rng, StepOptions options = {});

  std::size_t next_step() const { return n_; }
  const InscribedChainPair& pair() const { return pair_; }
  const std::vector<WedgeLife>& lineage() const { return lineage_; }
  const StepOptions& options() const { return options_; }

  // Swap the random stream, e.g. to replay one frozen state many times.
  void reseed(SeededGenerator rng) { rng_ = rng; }

  StepPreview preview() const;

  // Poisson batch from M_{q_n} over all wedges; the first admissible Poisson
  // point wins (uniform among them), else a band point drawn from a wedge
  // chosen in proportion to its band area. Throws ConstructionError when an
  // invariant breaks.
  StepRecord step();

 private:
  void check_local_convexity(std::size_t wedge_index) const;

  InscribedChainPair pair_;
  SeededGenerator rng_;
  StepOptions options_;
  std::size_t n_ = 1;
  std::vector<std::uint64_t> wedge_ids_;
  std::vector<WedgeLife> lineage_;
  std::vector<double> cumulative_;
};

struct RunConfig {
  Triangle root = kCanonicalTriangle;
  std::size_t horizon = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  StepOptions options;
};

struct RunSummary {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<StepRecord> steps;
  InscribedChainPair final_pair;
  std::map<std::uint64_t, std::size_t> hits_by_prime_power;
  std::vector<double> ell_trajectory;  // ell_1, ..., ell_{N+1}
  std::vector<WedgeLife> lineage;

  std::size_t hit_total() const;
};

// Throws ConstructionError (carrying the failing step) on invariant breaches.
RunSummary run(const RunConfig& config);

struct CensusReport {
  std::vector<std::size_t> ages;  // one per wedge ever created
  std::size_t max_age = 0;
  std::map<std::size_t, std::size_t> histogram;
  std::size_t split_count = 0;
  std::size_t alive_count = 0;
  std::size_t horizon = 0;

  double fraction_older_than(double age) const;
};

// Age of a split wedge = split step - born + 1; of a live wedge, N + 1 - born.
CensusReport wedge_split_census(const RunSummary& summary);

enum class StartPolicy { from_one, pilot };

struct TheoremConfig {
  std::size_t wedges = 8;
  std::size_t horizon = 400;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  Point center{0.0, 0.0};
  double radius = 1.0;
  StartPolicy policy = StartPolicy::from_one;
  double epsilon0 = 0.5;
  StepOptions options;
};

struct TheoremResult {
  // Runs are simulated in each wedge's canonical frame; triangles, curve and
  // the final pairs are mapped back to the circle's coordinates.
  std::vector<Triangle> triangles;
  std::vector<Point> curve;
  std::vector<std::size_t> start_offsets;   // N_i per wedge
  std::vector<std::size_t> hits_per_step;   // index n - 1
  std::vector<RunSummary> runs;          // records in canonical-frame units
  std::vector<InscribedChainPair> pairs;  // final pairs in circle coordinates
  bool convex = false;
};

// Tangent-chord triangles of a circle: wedge i spans angles pi / 2^{i+1} and
// pi / 2^{i+2}, so the chord endpoints accumulate monotonically at angle 0.
std::vector<Triangle> circle_wedges(Point center, double radius, std::size_t count);

// Independent constructions in each tangent-chord triangle, glued in circle
// order. hits_per_step[n-1] counts wedges i whose step n was a hit and n >= N_i.
TheoremResult assemble_theorem_curve(const TheoremConfig& config);

}  // namespace pcurve
