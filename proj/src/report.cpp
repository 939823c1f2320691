#include "pcurve/report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace pcurve {

bool Report::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json Report::body() const {
  nlohmann::json j;
  j["title"] = title;
  j["seed"] = seed;
  j["config"] = config;
  j["all_passed"] = all_passed();
  auto arr = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    arr.push_back({{"id", c.id},
                   {"name", c.name},
                   {"passed", c.passed},
                   {"measured", c.measured},
                   {"tolerance", c.tolerance},
                   {"detail", c.detail}});
  }
  j["checks"] = std::move(arr);
  return j;
}

nlohmann::json Report::manifest() const {
  nlohmann::json j;
  j["title"] = title;
  j["timestamp"] = utc_timestamp();
  auto timings = nlohmann::json::object();
  for (const CheckResult& c : checks) timings[c.id] = c.runtime_s;
  j["runtime_s"] = std::move(timings);
  return j;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_report(const Report& report, const std::filesystem::path& dir, const std::string& stem) {
  write_text_file(dir / (stem + ".json"), report.body().dump(2) + "\n");
  write_text_file(dir / (stem + ".manifest.json"), report.manifest().dump(2) + "\n");
}

}  // namespace pcurve
