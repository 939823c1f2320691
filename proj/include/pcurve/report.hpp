#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace pcurve {

struct CheckResult {
  std::string id;    // "C1" ... "C12"
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double runtime_s = 0.0;  // manifest only
};

struct Report {
  std::string title;
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<CheckResult> checks;

  bool all_passed() const;

  // Deterministic payload: no timings, no timestamps.
  nlohmann::json body() const;
  // Timings plus a wall-clock timestamp.
  nlohmann::json manifest() const;
};

// Writes <dir>/<stem>.json (body) and <dir>/<stem>.manifest.json.
void write_report(const Report& report, const std::filesystem::path& dir, const std::string& stem);

// UTC timestamp, ISO 8601.
std::string utc_timestamp();

// Writes text to path, creating parent directories. Throws std::runtime_error.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace pcurve
