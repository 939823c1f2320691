#include "pcurve/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "pcurve/report.hpp"

namespace pcurve {

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

RunConfig trial_config(const ExperimentConfig& config, std::size_t trial, std::size_t horizon,
                       std::uint64_t seed) {
  RunConfig rc;
  rc.root = config.root;
  rc.horizon = horizon;
  rc.seed = seed;
  rc.stream = stream_id(trial);
  rc.options.intensity_override = config.intensity_override;
  return rc;
}

std::vector<RunSummary> run_trials(const ExperimentConfig& config) {
  return parallel_map<RunSummary>(config.trials, config.threads, [&](std::size_t t) {
    return run(trial_config(config, t, config.horizon, config.seed));
  });
}

TheoremConfig theorem_config(const ExperimentConfig& config, std::size_t trial) {
  TheoremConfig tc;
  tc.wedges = config.wedges;
  tc.horizon = config.horizon;
  tc.seed = config.seed;
  tc.trial = trial;
  tc.center = config.circle_center;
  tc.radius = config.circle_radius;
  tc.policy = config.start_policy;
  tc.epsilon0 = config.epsilon0;
  tc.options.intensity_override = config.intensity_override;
  return tc;
}

Construction frozen_state(const ExperimentConfig& config, std::size_t n) {
  if (n < 1) throw std::invalid_argument("frozen_state: n must be >= 1");
  StepOptions options;
  options.intensity_override = config.intensity_override;
  Construction c(config.root, SeededGenerator(config.seed, stream_id(0)), options);
  while (c.next_step() < n) c.step();
  return c;
}

std::vector<MissRateRow> estimate_miss_rate(const ExperimentConfig& config,
                                            const std::vector<std::size_t>& n_list) {
  return parallel_map<MissRateRow>(n_list.size(), config.threads, [&](std::size_t k) {
    const std::size_t n = n_list[k];
    const Construction frozen = frozen_state(config, n);
    const StepPreview preview = frozen.preview();
    MissRateRow row;
    row.n = n;
    row.q = preview.q.value;
    row.intensity = preview.intensity;
    row.exact_s = preview.exact_s;
    row.p_exact = preview.miss_probability;
    row.replays = config.replays;
    for (std::size_t r = 0; r < config.replays; ++r) {
      Construction replay = frozen;
      // Replay streams live in their own range, disjoint from trial streams.
      replay.reseed(SeededGenerator(config.seed, (1ull << 62) | (std::uint64_t{n} << 24) | r));
      if (!replay.step().hit) ++row.misses;
    }
    row.miss_rate = static_cast<double>(row.misses) / static_cast<double>(row.replays);
    row.sigma = std::sqrt(row.p_exact * (1.0 - row.p_exact) / static_cast<double>(row.replays));
    return row;
  });
}

// ----- CSV ----------------------------------------------------------------

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> columns{
      "seed",      "horizon", "trial",   "n",          "q",         "q_base",
      "w",         "intensity", "poisson_count", "admissible_count", "hit", "wedge",
      "a_n",       "decrement", "exact_s", "ell_before", "ell_after"};
  return columns;
}

std::string sweep_csv_header() {
  std::string out;
  for (const auto& c : sweep_columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  const unsigned long long v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

}  // namespace

std::string sweep_csv_line(const SweepRow& row) {
  const StepRecord& s = row.step;
  std::string out;
  const auto add = [&out](const std::string& field) {
    if (!out.empty()) out += ',';
    out += field;
  };
  add(std::to_string(row.seed));
  add(std::to_string(row.horizon));
  add(std::to_string(row.trial));
  add(std::to_string(s.n));
  add(std::to_string(s.q.value));
  add(std::to_string(s.q.base));
  add(std::to_string(s.w.w));
  add(fmt_double(s.intensity));
  add(std::to_string(s.poisson_count));
  add(std::to_string(s.admissible_count));
  add(s.hit ? "1" : "0");
  add(std::to_string(s.wedge));
  add(fmt_double(s.a_n));
  add(fmt_double(s.decrement));
  add(fmt_double(s.exact_s));
  add(fmt_double(s.ell_before));
  add(fmt_double(s.ell_after));
  return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != sweep_csv_header())
    throw std::invalid_argument("sweep CSV: missing or unexpected header");
  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != sweep_columns().size())
      throw std::invalid_argument("sweep CSV line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(sweep_columns().size()) + " fields");
    SweepRow row;
    row.seed = parse_u64(f[0]);
    row.horizon = parse_u64(f[1]);
    row.trial = parse_u64(f[2]);
    StepRecord& s = row.step;
    s.n = parse_u64(f[3]);
    s.q.value = parse_u64(f[4]);
    s.q.base = parse_u64(f[5]);
    s.q.index = s.n;
    s.w = Intensity{s.q.value, parse_u64(f[6])};
    s.intensity = parse_double(f[7]);
    s.poisson_count = parse_u64(f[8]);
    s.admissible_count = parse_u64(f[9]);
    s.hit = f[10] == "1";
    s.wedge = parse_u64(f[11]);
    s.a_n = parse_double(f[12]);
    s.decrement = parse_double(f[13]);
    s.exact_s = parse_double(f[14]);
    s.ell_before = parse_double(f[15]);
    s.ell_after = parse_double(f[16]);
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_sweep_csv(text.str());
}

TrialStats trial_stats(const RunSummary& summary, std::uint64_t seed, std::size_t horizon,
                       std::size_t trial) {
  TrialStats st;
  st.seed = seed;
  st.horizon = horizon;
  st.trial = trial;
  st.steps = summary.steps.size();
  st.hits = summary.hit_total();
  if (!summary.steps.empty()) {
    st.ell_first = summary.steps.front().ell_before;
    st.ell_final = summary.steps.back().ell_after;
  }
  for (const StepRecord& s : summary.steps) st.total_decrement += s.decrement;
  return st;
}

std::vector<TrialStats> trial_stats(const std::vector<SweepRow>& rows) {
  std::vector<TrialStats> out;
  std::map<std::tuple<std::uint64_t, std::size_t, std::size_t>, std::size_t> slot;
  for (const SweepRow& row : rows) {
    const auto key = std::make_tuple(row.seed, row.horizon, row.trial);
    auto it = slot.find(key);
    if (it == slot.end()) {
      it = slot.emplace(key, out.size()).first;
      TrialStats st;
      st.seed = row.seed;
      st.horizon = row.horizon;
      st.trial = row.trial;
      st.ell_first = row.step.ell_before;
      out.push_back(st);
    }
    TrialStats& st = out[it->second];
    ++st.steps;
    if (row.step.hit) ++st.hits;
    st.ell_final = row.step.ell_after;
    st.total_decrement += row.step.decrement;
  }
  return out;
}

namespace {

struct SweepTask {
  std::uint64_t seed;
  std::size_t horizon;
  std::size_t trial;
};

struct TaskOutcome {
  std::optional<RunSummary> summary;
  std::string error;
};

}  // namespace

SweepResult sweep_in_memory(const ExperimentConfig& config) {
  const std::vector<std::size_t> horizons =
      config.sweep_horizons.empty() ? std::vector<std::size_t>{config.horizon} : config.sweep_horizons;
  const std::vector<std::uint64_t> seeds =
      config.sweep_seeds.empty() ? std::vector<std::uint64_t>{config.seed} : config.sweep_seeds;
  std::vector<SweepTask> tasks;
  for (std::size_t h : horizons)
    for (std::uint64_t s : seeds)
      for (std::size_t t = 0; t < config.trials; ++t) tasks.push_back({s, h, t});

  const auto outcomes =
      parallel_map<TaskOutcome>(tasks.size(), config.threads, [&](std::size_t i) {
        TaskOutcome out;
        try {
          out.summary = run(trial_config(config, tasks[i].trial, tasks[i].horizon, tasks[i].seed));
        } catch (const std::exception& e) {
          out.error = e.what();
        }
        return out;
      });

  SweepResult result;
  result.csv = sweep_csv_header() + "\n";
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const TaskOutcome& o = outcomes[i];
    if (!o.summary) {
      // Stop at the first failure so the file holds a prefix of the task list.
      result.complete = false;
      result.error = "seed " + std::to_string(tasks[i].seed) + " horizon " +
                     std::to_string(tasks[i].horizon) + " trial " +
                     std::to_string(tasks[i].trial) + ": " + o.error;
      break;
    }
    for (const StepRecord& s : o.summary->steps)
      result.csv += sweep_csv_line({tasks[i].seed, tasks[i].horizon, tasks[i].trial, s}) + "\n";
    result.stats.push_back(trial_stats(*o.summary, tasks[i].seed, tasks[i].horizon, tasks[i].trial));
  }
  return result;
}

SweepResult sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  SweepResult result = sweep_in_memory(config);
  write_text_file(out_dir / "runs" / "sweep.csv", result.csv);
  nlohmann::json manifest;
  manifest["complete"] = result.complete;
  manifest["error"] = result.error;
  manifest["trials_written"] = result.stats.size();
  manifest["columns"] = sweep_columns();
  manifest["timestamp"] = utc_timestamp();
  manifest["config"] = to_json(config);
  write_text_file(out_dir / "runs" / "sweep.manifest.json", manifest.dump(2) + "\n");
  return result;
}

}  // namespace pcurve
