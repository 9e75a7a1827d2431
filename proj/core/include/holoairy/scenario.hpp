// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration: a JSON document with one object per section. The
// grammar, units and defaults are documented in docs/config.md. Unknown keys
// are rejected so a typo never silently falls back to a default.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "holoairy/beamformer.hpp"
#include "holoairy/optimizer.hpp"
#include "holoairy/propagation.hpp"
#include "holoairy/rhs_model.hpp"

namespace holoairy {

struct ScenarioConfig {
  // rhs
  double frequency = 100e9;
  double aperture_length = 0.2;
  double rhs_spacing_wavelengths = 0.1;
  double reference_index = 2.0;
  double feed_power = 1.0;

  // scene
  std::vector<Obstacle> obstacles{Obstacle{-0.1, 0.5, 0.1, 0.2, 0.0}};
  Point user{-0.2, 2.4};

  // propagation
  double dx_max_wavelengths = 0.125;
  double plane_spacing = 5e-3;
  double window_margin = 0.3;
  double absorber_fraction = 0.1;

  // receiver; unset values take lambda^2/(4 pi) and the 20 dB calibration
  std::optional<double> effective_aperture;
  double impedance = kFreeSpaceImpedance;
  std::optional<double> noise_power;
  double calibration_distance = 1.0;
  double calibration_snr_db = 20.0;

  // optimizer
  double waist_wavelengths = 2.0;
  std::optional<double> offset_step;
  std::optional<double> estimate_grid_step;
  double clearance = 0.01;
  std::size_t min_active_elements = 8;

  // baselines
  double ula_spacing_wavelengths = 0.5;
  std::optional<Point> focused_target;
  double ula_offset_span = 0.4;   // c range scanned beyond the ULA aperture [m]
  double ula_offset_step = 2e-3;  // [m]

  // runtime
  std::size_t workers = 1;

  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig from_file(const std::string& path);
  std::string to_json_text(int indent = -1) const;
  // Applies "section.key=value" overrides; value is parsed as JSON, falling
  // back to a string. Throws std::invalid_argument for unknown keys.
  void apply_overrides(const std::vector<std::string>& overrides);
  void validate() const;
  // FNV-1a 64 of the canonical JSON text, as 16 hex digits.
  std::string hash() const;
  // Comment lines (without the leading '#') echoing the hash and parameters.
  std::vector<std::string> header_lines() const;
};

// Fully resolved simulation objects for one scenario.
struct Scenario {
  ScenarioConfig config;
  RhsConfig rhs;
  UlaConfig ula;
  Scene scene;
  ReceiverModel receiver;
  GridSpec grid;
  PropagationOptions propagation;
  OptimizerSettings optimizer;

  double wavelength() const { return rhs.wavelength(); }
  // Received power of an excitation at the configured receiver.
  double power_of(const ApertureExcitation& exc) const;
  PropagationResult field_of(const ApertureExcitation& exc, std::size_t retain_every = 0) const;
  // Same scenario with the receiver moved (grid and noise power unchanged).
  Scenario with_user(Point user) const;
};

Scenario resolve(const ScenarioConfig& config);

// Free-space received power of the RHS focused beam at (l/2, distance).
double focused_reference_power(const RhsConfig& rhs, const GridSpec& grid, const ReceiverModel& rx,
                               double plane_spacing, double distance, const PropagationOptions& options);

} // namespace holoairy
