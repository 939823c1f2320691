#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pcurve/config.hpp"
#include "pcurve/construction.hpp"

namespace pcurve {

// Runs fn(0..count-1) on up to `threads` workers (0 = hardware concurrency).
// Results keep index order. The first exception is rethrown after all
// workers finish.
template <typename T>
std::vector<T> parallel_map(std::size_t count, std::size_t threads,
                            const std::function<T(std::size_t)>& fn);

std::size_t resolve_threads(std::size_t requested);

// Trial t runs with stream stream_id(t) of the config seed.
RunConfig trial_config(const ExperimentConfig& config, std::size_t trial, std::size_t horizon,
                       std::uint64_t seed);

std::vector<RunSummary> run_trials(const ExperimentConfig& config);

// Circle assembly for one trial, using the config's circle, wedge count,
// start policy and horizon.
TheoremConfig theorem_config(const ExperimentConfig& config, std::size_t trial);

// ----- miss-probability estimation ---------------------------------------

struct MissRateRow {
  std::size_t n = 0;
  std::uint64_t q = 0;
  double intensity = 0.0;
  double exact_s = 0.0;
  double p_exact = 0.0;  // exp(-intensity * exact_s)
  std::size_t replays = 0;
  std::size_t misses = 0;
  double miss_rate = 0.0;
  double sigma = 0.0;  // binomial standard deviation of miss_rate under p_exact
};

// Freezes the state reached after n - 1 steps of trial 0 and replays step n
// `config.replays` times with fresh streams.
std::vector<MissRateRow> estimate_miss_rate(const ExperimentConfig& config,
                                            const std::vector<std::size_t>& n_list);

// Frozen state at step n (n - 1 steps of trial 0 already applied).
Construction frozen_state(const ExperimentConfig& config, std::size_t n);

// ----- sweep CSV --------------------------------------------------------

// Column order of sweep CSV files.
const std::vector<std::string>& sweep_columns();

struct SweepRow {
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  std::size_t trial = 0;
  StepRecord step;
};

// One CSV line (no newline), numbers rendered with 17 significant digits.
std::string sweep_csv_line(const SweepRow& row);
std::string sweep_csv_header();

std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

struct TrialStats {
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  std::size_t trial = 0;
  std::size_t steps = 0;
  std::size_t hits = 0;
  double ell_first = 0.0;
  double ell_final = 0.0;
  double total_decrement = 0.0;

  friend bool operator==(const TrialStats&, const TrialStats&) = default;
};

TrialStats trial_stats(const RunSummary& summary, std::uint64_t seed, std::size_t horizon,
                       std::size_t trial);
// Groups rows by (seed, horizon, trial), in first-appearance order.
std::vector<TrialStats> trial_stats(const std::vector<SweepRow>& rows);

struct SweepResult {
  std::vector<TrialStats> stats;
  std::string csv;  // full CSV text as written
  bool complete = true;
  std::string error;
};

// Runs every (horizon, seed, trial) combination and writes
// <out>/runs/sweep.csv and <out>/runs/sweep.manifest.json. On a failed trial
// the rows of the completed ones are still written and the manifest is marked
// incomplete.
SweepResult sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir);

// Sweep without touching the filesystem.
SweepResult sweep_in_memory(const ExperimentConfig& config);

}  // namespace pcurve

#include "pcurve/detail/parallel_map.ipp"
