// SPDX-License-Identifier: Apache-2.0

#include "holoairy/scenario.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace holoairy {

namespace {

using nlohmann::json;

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json point_json(Point p) { return json::array({p.x, p.z}); }

json to_json(const ScenarioConfig& c) {
  json obstacles = json::array();
  for (const auto& ob : c.obstacles)
    obstacles.push_back({{"x", ob.x}, {"z", ob.z}, {"length_z", ob.length_z}, {"width_x", ob.width_x},
                         {"attenuation", ob.attenuation}});
  return json{
      {"rhs",
       {{"frequency", c.frequency},
        {"aperture_length", c.aperture_length},
        {"spacing_wavelengths", c.rhs_spacing_wavelengths},
        {"reference_index", c.reference_index},
        {"feed_power", c.feed_power}}},
      {"scene", {{"obstacles", obstacles}, {"user", point_json(c.user)}}},
      {"propagation",
       {{"dx_max_wavelengths", c.dx_max_wavelengths},
        {"plane_spacing", c.plane_spacing},
        {"window_margin", c.window_margin},
        {"absorber_fraction", c.absorber_fraction}}},
      {"receiver",
       {{"effective_aperture", optional_json(c.effective_aperture)},
        {"impedance", c.impedance},
        {"noise_power", optional_json(c.noise_power)},
        {"calibration_distance", c.calibration_distance},
        {"calibration_snr_db", c.calibration_snr_db}}},
      {"optimizer",
       {{"waist_wavelengths", c.waist_wavelengths},
        {"offset_step", optional_json(c.offset_step)},
        {"estimate_grid_step", optional_json(c.estimate_grid_step)},
        {"clearance", c.clearance},
        {"min_active_elements", c.min_active_elements}}},
      {"baselines",
       {{"ula_spacing_wavelengths", c.ula_spacing_wavelengths},
        {"focused_target", c.focused_target ? point_json(*c.focused_target) : json(nullptr)},
        {"ula_offset_span", c.ula_offset_span},
        {"ula_offset_step", c.ula_offset_step}}},
      {"runtime", {{"workers", c.workers}}},
  };
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) throw std::invalid_argument(key + ": expected a number");
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& key) {
  if (!j.is_number_unsigned()) throw std::invalid_argument(key + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

std::optional<double> optional_number(const json& j, const std::string& key) {
  if (j.is_null()) return std::nullopt;
  return number(j, key);
}

Point point(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument(key + ": expected [x, z]");
  return {number(j[0], key), number(j[1], key)};
}

const std::vector<std::string> kObstacleKeys{"x", "z", "length_z", "width_x", "attenuation"};

Obstacle obstacle(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("scene.obstacles: expected objects");
  for (const auto& [key, _] : j.items())
    if (std::find(kObstacleKeys.begin(), kObstacleKeys.end(), key) == kObstacleKeys.end())
      throw std::invalid_argument("scene.obstacles: unknown key '" + key + "'");
  for (const auto& key : kObstacleKeys)
    if (!j.contains(key) && key != "attenuation")
      throw std::invalid_argument("scene.obstacles: missing key '" + key + "'");
  Obstacle ob;
  ob.x = number(j.at("x"), "obstacle.x");
  ob.z = number(j.at("z"), "obstacle.z");
  ob.length_z = number(j.at("length_z"), "obstacle.length_z");
  ob.width_x = number(j.at("width_x"), "obstacle.width_x");
  ob.attenuation = j.contains("attenuation") ? number(j.at("attenuation"), "obstacle.attenuation") : 0.0;
  return ob;
}

ScenarioConfig from_json(const json& j) {
  ScenarioConfig c;
  const auto& rhs = j.at("rhs");
  c.frequency = number(rhs.at("frequency"), "rhs.frequency");
  c.aperture_length = number(rhs.at("aperture_length"), "rhs.aperture_length");
  c.rhs_spacing_wavelengths = number(rhs.at("spacing_wavelengths"), "rhs.spacing_wavelengths");
  c.reference_index = number(rhs.at("reference_index"), "rhs.reference_index");
  c.feed_power = number(rhs.at("feed_power"), "rhs.feed_power");

  const auto& scene = j.at("scene");
  if (!scene.at("obstacles").is_array()) throw std::invalid_argument("scene.obstacles: expected an array");
  c.obstacles.clear();
  for (const auto& ob : scene.at("obstacles")) c.obstacles.push_back(obstacle(ob));
  c.user = point(scene.at("user"), "scene.user");

  const auto& prop = j.at("propagation");
  c.dx_max_wavelengths = number(prop.at("dx_max_wavelengths"), "propagation.dx_max_wavelengths");
  c.plane_spacing = number(prop.at("plane_spacing"), "propagation.plane_spacing");
  c.window_margin = number(prop.at("window_margin"), "propagation.window_margin");
  c.absorber_fraction = number(prop.at("absorber_fraction"), "propagation.absorber_fraction");

  const auto& rx = j.at("receiver");
  c.effective_aperture = optional_number(rx.at("effective_aperture"), "receiver.effective_aperture");
  c.impedance = number(rx.at("impedance"), "receiver.impedance");
  c.noise_power = optional_number(rx.at("noise_power"), "receiver.noise_power");
  c.calibration_distance = number(rx.at("calibration_distance"), "receiver.calibration_distance");
  c.calibration_snr_db = number(rx.at("calibration_snr_db"), "receiver.calibration_snr_db");

  const auto& opt = j.at("optimizer");
  c.waist_wavelengths = number(opt.at("waist_wavelengths"), "optimizer.waist_wavelengths");
  c.offset_step = optional_number(opt.at("offset_step"), "optimizer.offset_step");
  c.estimate_grid_step = optional_number(opt.at("estimate_grid_step"), "optimizer.estimate_grid_step");
  c.clearance = number(opt.at("clearance"), "optimizer.clearance");
  c.min_active_elements = count(opt.at("min_active_elements"), "optimizer.min_active_elements");

  const auto& base = j.at("baselines");
  c.ula_spacing_wavelengths = number(base.at("ula_spacing_wavelengths"), "baselines.ula_spacing_wavelengths");
  if (!base.at("focused_target").is_null()) c.focused_target = point(base.at("focused_target"), "baselines.focused_target");
  c.ula_offset_span = number(base.at("ula_offset_span"), "baselines.ula_offset_span");
  c.ula_offset_step = number(base.at("ula_offset_step"), "baselines.ula_offset_step");

  c.workers = count(j.at("runtime").at("workers"), "runtime.workers");
  c.validate();
  return c;
}

// Overlays `patch` on `base`, rejecting keys that the defaults do not define.
void merge_strict(json& base, const json& patch, const std::string& path) {
  if (!patch.is_object()) throw std::invalid_argument((path.empty() ? "config" : path) + ": expected an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string where = path.empty() ? key : path + "." + key;
    if (!base.contains(key)) throw std::invalid_argument("unknown config key '" + where + "'");
    if (base[key].is_object())
      merge_strict(base[key], value, where);
    else
      base[key] = value;
  }
}

} // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  json merged = to_json(ScenarioConfig{});
  merge_strict(merged, doc, "");
  return from_json(merged);
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string ScenarioConfig::to_json_text(int indent) const { return to_json(*this).dump(indent); }

void ScenarioConfig::apply_overrides(const std::vector<std::string>& overrides) {
  json doc = to_json(*this);
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("override '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    json value;
    try {
      value = json::parse(text);
    } catch (const json::parse_error&) {
      value = text;
    }
    json patch = value;
    std::string rest = key;
    std::vector<std::string> parts;
    for (std::size_t dot; (dot = rest.find('.')) != std::string::npos; rest = rest.substr(dot + 1))
      parts.push_back(rest.substr(0, dot));
    parts.push_back(rest);
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
    merge_strict(doc, patch, "");
  }
  *this = from_json(doc);
}

void ScenarioConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(frequency, "rhs.frequency");
  positive(aperture_length, "rhs.aperture_length");
  positive(rhs_spacing_wavelengths, "rhs.spacing_wavelengths");
  positive(reference_index, "rhs.reference_index");
  positive(feed_power, "rhs.feed_power");
  for (const auto& ob : obstacles) ob.validate();
  positive(user.z, "scene.user z");
  if (!std::isfinite(user.x)) throw std::invalid_argument("scene.user x must be finite");
  positive(dx_max_wavelengths, "propagation.dx_max_wavelengths");
  positive(plane_spacing, "propagation.plane_spacing");
  if (!(window_margin >= 0.0)) throw std::invalid_argument("propagation.window_margin must be non-negative");
  if (!(absorber_fraction >= 0.0 && absorber_fraction < 0.5))
    throw std::invalid_argument("propagation.absorber_fraction must lie in [0, 0.5)");
  if (effective_aperture) positive(*effective_aperture, "receiver.effective_aperture");
  positive(impedance, "receiver.impedance");
  if (noise_power) positive(*noise_power, "receiver.noise_power");
  positive(calibration_distance, "receiver.calibration_distance");
  if (!std::isfinite(calibration_snr_db)) throw std::invalid_argument("receiver.calibration_snr_db must be finite");
  positive(waist_wavelengths, "optimizer.waist_wavelengths");
  if (offset_step) positive(*offset_step, "optimizer.offset_step");
  if (estimate_grid_step) positive(*estimate_grid_step, "optimizer.estimate_grid_step");
  if (!(clearance >= 0.0)) throw std::invalid_argument("optimizer.clearance must be non-negative");
  positive(ula_spacing_wavelengths, "baselines.ula_spacing_wavelengths");
  if (focused_target) positive(focused_target->z, "baselines.focused_target z");
  positive(ula_offset_span, "baselines.ula_offset_span");
  positive(ula_offset_step, "baselines.ula_offset_step");
  if (workers == 0) throw std::invalid_argument("runtime.workers must be at least 1");
}

std::string ScenarioConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json_text()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::vector<std::string> ScenarioConfig::header_lines() const {
  return {"holoairy config_hash=" + hash(), "config=" + to_json_text()};
}

double Scenario::power_of(const ApertureExcitation& exc) const {
  const auto result = propagate(exc, scene, grid, rhs.wavenumber(), propagation);
  return received_power(result.final_slice, receiver, scene.receiver.x);
}

PropagationResult Scenario::field_of(const ApertureExcitation& exc, std::size_t retain_every) const {
  PropagationOptions opts = propagation;
  opts.retain_every = retain_every;
  return propagate(exc, scene, grid, rhs.wavenumber(), opts);
}

Scenario Scenario::with_user(Point user) const {
  if (!grid.contains(user.x)) throw std::invalid_argument("user lies outside the simulation window");
  if (!(user.z > 0.0)) throw std::invalid_argument("user z must be positive");
  Scenario out = *this;
  out.config.user = user;
  out.scene.receiver = user;
  return out;
}

double focused_reference_power(const RhsConfig& rhs, const GridSpec& grid, const ReceiverModel& rx,
                               double plane_spacing, double distance, const PropagationOptions& options) {
  Scene free_space;
  free_space.receiver = {0.5 * rhs.aperture_length(), distance};
  free_space.plane_spacing = plane_spacing;
  const auto exc = focused_rhs(rhs, free_space.receiver);
  PropagationOptions opts = options;
  opts.retain_every = 0;
  const auto result = propagate(exc, free_space, grid, rhs.wavenumber(), opts);
  return received_power(result.final_slice, rx, free_space.receiver.x);
}

Scenario resolve(const ScenarioConfig& config) {
  config.validate();
  Scenario s;
  s.config = config;
  const double lambda = wavelength_for(config.frequency);
  s.rhs = RhsConfig::from_aperture(config.aperture_length, lambda * config.rhs_spacing_wavelengths, config.frequency,
                                   config.reference_index, config.feed_power);
  s.rhs.validate();
  s.ula = UlaConfig::over_aperture(config.aperture_length, lambda * config.ula_spacing_wavelengths, config.frequency,
                                   config.feed_power);
  s.ula.validate();

  s.scene.obstacles = config.obstacles;
  s.scene.receiver = config.user;
  s.scene.plane_spacing = config.plane_spacing;
  s.scene.validate();

  double x_lo = std::min({0.0, config.user.x});
  double x_hi = std::max({s.rhs.aperture_length(), s.ula.aperture_length(), config.user.x});
  for (const auto& ob : config.obstacles) {
    x_lo = std::min(x_lo, ob.x);
    x_hi = std::max(x_hi, ob.x + ob.width_x);
  }
  if (config.focused_target) {
    x_lo = std::min(x_lo, config.focused_target->x);
    x_hi = std::max(x_hi, config.focused_target->x);
  }
  s.grid = simulation_grid(x_lo, x_hi, lambda * config.dx_max_wavelengths, s.rhs.element_spacing,
                           config.window_margin);

  s.propagation.absorber_fraction = config.absorber_fraction;

  s.receiver.effective_aperture =
      config.effective_aperture ? *config.effective_aperture : lambda * lambda / (4.0 * kPi);
  s.receiver.impedance = config.impedance;
  if (config.noise_power) {
    s.receiver.noise_power = *config.noise_power;
  } else {
    const double p_ref = focused_reference_power(s.rhs, s.grid, s.receiver, config.plane_spacing,
                                                 config.calibration_distance, s.propagation);
    s.receiver.noise_power = p_ref / std::pow(10.0, config.calibration_snr_db / 10.0);
  }
  s.receiver.validate();

  s.optimizer.waist = lambda * config.waist_wavelengths;
  s.optimizer.step = config.offset_step.value_or(0.0);
  s.optimizer.grid_step = config.estimate_grid_step.value_or(0.0);
  s.optimizer.clearance = config.clearance;
  s.optimizer.min_active = config.min_active_elements;
  s.optimizer = s.optimizer.resolved(s.rhs);
  return s;
}

} // namespace holoairy
