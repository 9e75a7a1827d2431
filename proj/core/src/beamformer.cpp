// SPDX-License-Identifier: Apache-2.0

#include "holoairy/beamformer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace holoairy {

UlaConfig UlaConfig::over_aperture(double aperture_length, double element_spacing, double carrier_frequency,
                                   double feed_power) {
  if (!(aperture_length >= 0.0) || !(element_spacing > 0.0))
    throw std::invalid_argument("aperture length must be >= 0 and spacing > 0");
  UlaConfig ula;
  // small slack so l = k * spacing up to rounding keeps its last element
  ula.element_count = static_cast<std::size_t>(std::floor(aperture_length / element_spacing + 1e-9)) + 1;
  ula.element_spacing = element_spacing;
  ula.carrier_frequency = carrier_frequency;
  ula.feed_power = feed_power;
  ula.validate();
  return ula;
}

std::vector<double> UlaConfig::element_positions() const {
  std::vector<double> x(element_count);
  for (std::size_t n = 0; n < element_count; ++n) x[n] = element_spacing * static_cast<double>(n);
  return x;
}

void UlaConfig::validate() const {
  if (element_count < 1) throw std::invalid_argument("ULA needs at least one element");
  if (!(element_spacing > 0.0)) throw std::invalid_argument("ULA spacing must be positive");
  if (!(carrier_frequency > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
  if (!(feed_power > 0.0)) throw std::invalid_argument("feed power must be positive");
}

EquivalentExcitation holographic_excitation(const RhsConfig& cfg, const std::vector<double>& target_phase,
                                            const std::vector<std::uint8_t>& active) {
  if (target_phase.size() != cfg.element_count || active.size() != cfg.element_count)
    throw std::invalid_argument("target phase / activation length does not match element count");
  EquivalentExcitation exc;
  exc.amplitudes.assign(cfg.element_count, 0.0);
  exc.activation = active;
  double sum_sq = 0.0;
  for (std::size_t n = 0; n < cfg.element_count; ++n) {
    if (!active[n]) continue;
    const double difference = target_phase[n] - cfg.reference_phase(n);
    const double m = 0.5 * (std::cos(difference) + 1.0);
    exc.amplitudes[n] = m;
    sum_sq += m * m;
  }
  if (!(sum_sq > 0.0)) throw std::domain_error("holographic pattern leaves every element dark");
  exc.equivalent_ratio = 1.0 / sum_sq;
  return exc;
}

ApertureExcitation airy_rhs(const RhsConfig& cfg, const Trajectory& traj, std::size_t min_active) {
  cfg.validate();
  const double k = cfg.wavenumber();
  std::vector<double> target(cfg.element_count, 0.0);
  std::vector<std::uint8_t> active(cfg.element_count, 0);
  std::size_t count = 0;
  for (std::size_t n = 0; n < cfg.element_count; ++n) {
    const double x = cfg.element_position(n);
    if (!traj.covers(x)) continue;
    active[n] = 1;
    target[n] = -phase_profile(traj, k, x);
    ++count;
  }
  if (count < std::max<std::size_t>(min_active, 1))
    throw std::domain_error("trajectory activates " + std::to_string(count) + " elements, need " +
                            std::to_string(std::max<std::size_t>(min_active, 1)));
  return radiate_equivalent(cfg, holographic_excitation(cfg, target, active));
}

ApertureExcitation airy_ula(const UlaConfig& ula, const Trajectory& traj) {
  ula.validate();
  const double k = ula.wavenumber();
  const double amplitude = std::sqrt(ula.feed_power / static_cast<double>(ula.element_count));
  ApertureExcitation out;
  out.power_budget = ula.feed_power;
  out.positions = ula.element_positions();
  out.weights.resize(ula.element_count);
  for (std::size_t n = 0; n < ula.element_count; ++n) {
    const double x = out.positions[n];
    const double phase = traj.covers(x) ? -phase_profile(traj, k, x) : 0.0;
    out.weights[n] = std::polar(amplitude, phase);
  }
  return out;
}

namespace {

double focusing_phase(double k, double x, Point target) {
  return k * std::hypot(x - target.x, target.z);
}

void require_target(Point target) {
  if (!(target.z > 0.0) || !std::isfinite(target.x)) throw std::invalid_argument("focus target needs z > 0");
}

} // namespace

ApertureExcitation focused_rhs(const RhsConfig& cfg, Point target) {
  cfg.validate();
  require_target(target);
  const double k = cfg.wavenumber();
  std::vector<double> phase(cfg.element_count);
  for (std::size_t n = 0; n < cfg.element_count; ++n) phase[n] = focusing_phase(k, cfg.element_position(n), target);
  return radiate_equivalent(cfg, holographic_excitation(cfg, phase, std::vector<std::uint8_t>(cfg.element_count, 1)));
}

ApertureExcitation focused_ula(const UlaConfig& ula, Point target) {
  ula.validate();
  require_target(target);
  const double k = ula.wavenumber();
  const double amplitude = std::sqrt(ula.feed_power / static_cast<double>(ula.element_count));
  ApertureExcitation out;
  out.power_budget = ula.feed_power;
  out.positions = ula.element_positions();
  out.weights.resize(ula.element_count);
  for (std::size_t n = 0; n < ula.element_count; ++n)
    out.weights[n] = std::polar(amplitude, focusing_phase(k, out.positions[n], target));
  return out;
}

} // namespace holoairy
