#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcurve/construction.hpp"
#include "pcurve/geometry.hpp"

namespace pcurve {

enum class Mode { simulate, theorem, verify, render, sweep };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);
std::string to_string(StartPolicy policy);
StartPolicy start_policy_from_string(const std::string& s);

// Everything a CLI invocation needs. Serialized as a flat JSON object; see
// README.md for the key list.
struct ExperimentConfig {
  Mode mode = Mode::simulate;
  Triangle root = kCanonicalTriangle;
  Point circle_center{0.0, 0.0};
  double circle_radius = 4.0;
  std::size_t horizon = 200;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::size_t wedges = 8;
  StartPolicy start_policy = StartPolicy::from_one;
  double epsilon0 = 0.5;
  std::string out_dir = "out";
  std::optional<double> intensity_override;

  // verify / miss-rate knobs
  double tolerance_scale = 1.0;  // multiplies every check tolerance
  double sample_scale = 1.0;     // multiplies every check sample size
  std::vector<std::size_t> miss_steps{1, 2, 3, 5, 8};
  std::size_t replays = 2000;

  // sweep grid; empty means {horizon} / {seed}
  std::vector<std::size_t> sweep_horizons;
  std::vector<std::uint64_t> sweep_seeds;

  // render knobs
  bool render_bands = true;

  std::size_t threads = 0;  // 0 = hardware concurrency

  void validate() const;  // throws std::invalid_argument
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& config, const std::filesystem::path& path);

// Applies one `key=value` override. The value is parsed as JSON when it can
// be (numbers, arrays, true/false), otherwise taken as a string.
void apply_override(ExperimentConfig& config, const std::string& assignment);

}  // namespace pcurve
