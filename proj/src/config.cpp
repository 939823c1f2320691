#include "pcurve/config.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "pcurve/report.hpp"

namespace pcurve {

namespace {

using nlohmann::json;

json point_json(Point p) { return json::array({p.x, p.y}); }
Point json_point(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::simulate: return "simulate";
    case Mode::theorem: return "theorem";
    case Mode::verify: return "verify";
    case Mode::render: return "render";
    case Mode::sweep: return "sweep";
  }
  return "simulate";
}

Mode mode_from_string(const std::string& s) {
  for (Mode m : {Mode::simulate, Mode::theorem, Mode::verify, Mode::render, Mode::sweep})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

std::string to_string(StartPolicy policy) {
  return policy == StartPolicy::pilot ? "pilot" : "from_one";
}

StartPolicy start_policy_from_string(const std::string& s) {
  if (s == "from_one") return StartPolicy::from_one;
  if (s == "pilot") return StartPolicy::pilot;
  throw std::invalid_argument("unknown start policy '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (root.degenerate()) throw std::invalid_argument("config: root triangle is degenerate");
  if (!(circle_radius > 0.0)) throw std::invalid_argument("config: circle_radius must be positive");
  if (horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (wedges < 1 || wedges > 40) throw std::invalid_argument("config: wedges must be in [1, 40]");
  if (!(epsilon0 > 0.0)) throw std::invalid_argument("config: epsilon0 must be positive");
  if (!(tolerance_scale >= 0.0)) throw std::invalid_argument("config: tolerance_scale must be >= 0");
  if (!(sample_scale > 0.0)) throw std::invalid_argument("config: sample_scale must be positive");
  if (replays < 1) throw std::invalid_argument("config: replays must be >= 1");
  if (intensity_override && !(*intensity_override >= 0.0))
    throw std::invalid_argument("config: intensity_override must be >= 0");
  for (std::size_t n : miss_steps)
    if (n < 1) throw std::invalid_argument("config: miss_steps entries must be >= 1");
  for (std::size_t h : sweep_horizons)
    if (h < 1) throw std::invalid_argument("config: sweep_horizons entries must be >= 1");
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["mode"] = to_string(c.mode);
  j["root"] = json::array({point_json(c.root.a), point_json(c.root.b), point_json(c.root.c)});
  j["circle_center"] = point_json(c.circle_center);
  j["circle_radius"] = c.circle_radius;
  j["horizon"] = c.horizon;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["wedges"] = c.wedges;
  j["start_policy"] = to_string(c.start_policy);
  j["epsilon0"] = c.epsilon0;
  j["out_dir"] = c.out_dir;
  j["intensity_override"] = c.intensity_override ? json(*c.intensity_override) : json(nullptr);
  j["tolerance_scale"] = c.tolerance_scale;
  j["sample_scale"] = c.sample_scale;
  j["miss_steps"] = c.miss_steps;
  j["replays"] = c.replays;
  j["sweep_horizons"] = c.sweep_horizons;
  j["sweep_seeds"] = c.sweep_seeds;
  j["render_bands"] = c.render_bands;
  j["threads"] = c.threads;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  static const char* const known[] = {
      "mode", "root", "circle_center", "circle_radius", "horizon", "trials", "seed",
      "wedges", "start_policy", "epsilon0", "out_dir", "intensity_override",
      "tolerance_scale", "sample_scale", "miss_steps", "replays", "sweep_horizons",
      "sweep_seeds", "render_bands", "threads"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw std::invalid_argument("config: unknown key '" + key + "'");
  }

  ExperimentConfig c;
  try {
    if (j.contains("mode")) c.mode = mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("root")) {
      const auto& r = j.at("root");
      c.root = Triangle{json_point(r.at(0)), json_point(r.at(1)), json_point(r.at(2))};
    }
    if (j.contains("circle_center")) c.circle_center = json_point(j.at("circle_center"));
    read_if(j, "circle_radius", c.circle_radius);
    read_if(j, "horizon", c.horizon);
    read_if(j, "trials", c.trials);
    read_if(j, "seed", c.seed);
    read_if(j, "wedges", c.wedges);
    if (j.contains("start_policy"))
      c.start_policy = start_policy_from_string(j.at("start_policy").get<std::string>());
    read_if(j, "epsilon0", c.epsilon0);
    read_if(j, "out_dir", c.out_dir);
    if (j.contains("intensity_override") && !j.at("intensity_override").is_null())
      c.intensity_override = j.at("intensity_override").get<double>();
    read_if(j, "tolerance_scale", c.tolerance_scale);
    read_if(j, "sample_scale", c.sample_scale);
    read_if(j, "miss_steps", c.miss_steps);
    read_if(j, "replays", c.replays);
    read_if(j, "sweep_horizons", c.sweep_horizons);
    read_if(j, "sweep_seeds", c.sweep_seeds);
    read_if(j, "render_bands", c.render_bands);
    read_if(j, "threads", c.threads);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const ExperimentConfig& config, const std::filesystem::path& path) {
  write_text_file(path, to_json(config).dump(2) + "\n");
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;
  json j = to_json(config);
  if (!j.contains(key)) throw std::invalid_argument("override: unknown key '" + key + "'");
  j[key] = value;
  config = config_from_json(j);
}

}  // namespace pcurve
