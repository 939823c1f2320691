// pcurve: simulate, theorem, verify, render, sweep.
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcurve/admissible.hpp"
#include "pcurve/config.hpp"
#include "pcurve/construction.hpp"
#include "pcurve/experiments.hpp"
#include "pcurve/render.hpp"
#include "pcurve/report.hpp"
#include "pcurve/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pcurve;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option("--out", args.out, "output directory (overrides out_dir)");
  sub->add_option_function<std::uint64_t>(
      "--seed", [&args](const std::uint64_t& s) { args.seed = s; args.seed_given = true; },
      "master seed");
  sub->add_option("--set", args.overrides, "key=value config override (repeatable)");
}

ExperimentConfig resolve(const CommonArgs& args, Mode mode) {
  ExperimentConfig config = args.config_path.empty() ? ExperimentConfig{} : load_config(args.config_path);
  config.mode = mode;
  for (const std::string& o : args.overrides) apply_override(config, o);
  if (args.seed_given) config.seed = args.seed;
  if (!args.out.empty()) config.out_dir = args.out;
  config.validate();
  return config;
}

int cmd_simulate(const ExperimentConfig& config) {
  const fs::path out = config.out_dir;
  const auto summaries = run_trials(config);
  std::string csv = sweep_csv_header() + "\n";
  json trials = json::array();
  const double c_star = length_floor(config.horizon + 1);
  bool ok = true;
  for (std::size_t t = 0; t < summaries.size(); ++t) {
    const RunSummary& s = summaries[t];
    for (const StepRecord& rec : s.steps) csv += sweep_csv_line({config.seed, config.horizon, t, rec}) + "\n";
    const CensusReport census = wedge_split_census(s);
    const double ratio = s.ell_trajectory.back() / s.ell_trajectory.front();
    ok = ok && ratio >= c_star - 1e-9;
    trials.push_back({{"trial", t},
                      {"hits", s.hit_total()},
                      {"ell_first", s.ell_trajectory.front()},
                      {"ell_final", s.ell_trajectory.back()},
                      {"ell_ratio", ratio},
                      {"max_wedge_age", census.max_age},
                      {"fraction_older_than_half", census.fraction_older_than(0.5 * config.horizon)}});
    std::printf("trial %zu: hits %zu/%zu  ell %.6f -> %.6f\n", t, s.hit_total(), s.steps.size(),
                s.ell_trajectory.front(), s.ell_trajectory.back());
  }
  write_text_file(out / "runs" / "simulate.csv", csv);
  json report{{"title", "simulate"}, {"config", to_json(config)}, {"length_floor", c_star},
              {"floor_holds", ok}, {"trials", trials}};
  write_text_file(out / "reports" / "simulate.json", report.dump(2) + "\n");
  write_text_file(out / "reports" / "simulate.manifest.json",
                  json{{"title", "simulate"}, {"timestamp", utc_timestamp()}}.dump(2) + "\n");
  return ok ? 0 : 1;
}

int cmd_theorem(const ExperimentConfig& config) {
  const fs::path out = config.out_dir;
  const auto results = parallel_map<TheoremResult>(config.trials, config.threads, [&](std::size_t t) {
    return assemble_theorem_curve(theorem_config(config, t));
  });
  std::vector<double> mean_hits(config.horizon, 0.0);
  json trials = json::array();
  bool all_convex = true;
  for (std::size_t t = 0; t < results.size(); ++t) {
    const TheoremResult& r = results[t];
    for (std::size_t n = 0; n < config.horizon; ++n)
      mean_hits[n] += static_cast<double>(r.hits_per_step[n]) / static_cast<double>(config.trials);
    all_convex = all_convex && r.convex;
    trials.push_back({{"trial", t}, {"convex", r.convex}, {"start_offsets", r.start_offsets},
                      {"curve_vertices", r.curve.size()}});
  }
  json bins = json::array();
  for (std::size_t lo = 1; lo <= config.horizon; lo += 50) {
    const std::size_t hi = std::min(lo + 49, config.horizon);
    double sum = 0.0;
    for (std::size_t n = lo; n <= hi; ++n) sum += mean_hits[n - 1];
    bins.push_back({{"from", lo}, {"to", hi}, {"mean_hits_per_step", sum / static_cast<double>(hi - lo + 1)}});
    std::printf("n in [%zu,%zu]: mean hits/step %.4f\n", lo, hi, sum / static_cast<double>(hi - lo + 1));
  }
  std::printf("convex: %s\n", all_convex ? "all trials" : "FAILED");
  json report{{"title", "theorem"}, {"config", to_json(config)}, {"all_convex", all_convex},
              {"mean_hits_per_step", mean_hits}, {"bins", bins}, {"trials", trials}};
  write_text_file(out / "reports" / "theorem.json", report.dump(2) + "\n");
  write_text_file(out / "reports" / "theorem.manifest.json",
                  json{{"title", "theorem"}, {"timestamp", utc_timestamp()}}.dump(2) + "\n");
  RenderOptions ro;
  ro.title = "theorem assembly, trial 0";
  write_svg(render_theorem_svg(results.front(), config.circle_center, config.circle_radius, ro),
            out / "figures" / "theorem.svg");
  return all_convex ? 0 : 1;
}

int cmd_verify(const ExperimentConfig& config) {
  const Report report = verify_lemma_suite(config);
  for (const CheckResult& c : report.checks)
    std::printf("%-4s %s  %s  (%.2fs)\n    %s\n", c.id.c_str(), c.passed ? "PASS" : "FAIL", c.name.c_str(),
                c.runtime_s, c.detail.c_str());
  write_report(report, fs::path(config.out_dir) / "reports", "verify");
  return report.all_passed() ? 0 : 1;
}

int cmd_render(const ExperimentConfig& config) {
  const fs::path out = config.out_dir;
  Construction c(config.root, SeededGenerator(config.seed, stream_id(0)),
                 StepOptions{config.intensity_override});
  const auto render = [&](const std::string& name) {
    RenderOptions ro;
    ro.title = name + " after " + std::to_string(c.next_step() - 1) + " steps";
    if (config.render_bands) ro.band_alpha = c.preview().a_n;
    write_svg(render_svg(c.pair(), ro), out / "figures" / (name + ".svg"));
  };
  // Step 1 has a_1 = ell / 2, the widest band.
  render("initial");
  while (c.next_step() <= config.horizon) c.step();
  render("final");
  std::printf("wrote %s and %s\n", (out / "figures" / "initial.svg").c_str(), (out / "figures" / "final.svg").c_str());
  return 0;
}

int cmd_sweep(const ExperimentConfig& config) {
  const SweepResult result = sweep(config, config.out_dir);
  std::printf("%zu trials written to %s\n", result.stats.size(),
              (fs::path(config.out_dir) / "runs" / "sweep.csv").c_str());
  if (!result.complete) std::fprintf(stderr, "sweep incomplete: %s\n", result.error.c_str());
  return result.complete ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random strictly convex curves through Poisson pseudo-lattices"};
  app.require_subcommand(1);
  struct Entry {
    const char* name;
    const char* help;
    Mode mode;
    int (*fn)(const ExperimentConfig&);
  };
  const Entry entries[] = {
      {"simulate", "run trials in the root triangle; runs/simulate.csv", Mode::simulate, cmd_simulate},
      {"theorem", "circle-of-wedges assembly; reports/theorem.json, figures/theorem.svg", Mode::theorem,
       cmd_theorem},
      {"verify", "check suite C1-C12; reports/verify.json", Mode::verify, cmd_verify},
      {"render", "SVG of the initial and final pair; figures/*.svg", Mode::render, cmd_render},
      {"sweep", "grid of horizons x seeds x trials; runs/sweep.csv", Mode::sweep, cmd_sweep},
  };
  std::vector<CommonArgs> args(std::size(entries));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(entries); ++i) {
    subs.push_back(app.add_subcommand(entries[i].name, entries[i].help));
    add_common(subs.back(), args[i]);
  }
  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      return entries[i].fn(resolve(args[i], entries[i].mode));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "%s: %s\n", entries[i].name, e.what());
      return 2;
    }
  }
  return 2;
}
