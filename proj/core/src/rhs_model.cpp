// SPDX-License-Identifier: Apache-2.0

#include "holoairy/rhs_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace holoairy {

namespace {

void require_ratio(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

void check_length(const RhsConfig& cfg, std::size_t n) {
  if (n != cfg.element_count)
    throw std::invalid_argument("excitation length " + std::to_string(n) + " does not match element count " +
                                std::to_string(cfg.element_count));
}

ApertureExcitation with_reference_phase(const RhsConfig& cfg, const std::vector<double>& amplitudes) {
  ApertureExcitation out;
  out.power_budget = cfg.feed_power;
  out.positions = cfg.element_positions();
  out.weights.resize(amplitudes.size());
  const double scale = std::sqrt(cfg.feed_power);
  for (std::size_t n = 0; n < amplitudes.size(); ++n)
    out.weights[n] = std::polar(amplitudes[n] * scale, cfg.reference_phase(n));
  return out;
}

} // namespace

double ApertureExcitation::total_power() const {
  double sum = 0.0;
  for (const auto& w : weights) sum += std::norm(w);
  return sum;
}

void ApertureExcitation::validate(double tolerance) const {
  if (positions.size() != weights.size()) throw std::invalid_argument("positions and weights differ in length");
  for (std::size_t n = 0; n < weights.size(); ++n)
    if (!std::isfinite(positions[n]) || !std::isfinite(weights[n].real()) || !std::isfinite(weights[n].imag()))
      throw std::invalid_argument("non-finite excitation entry");
  if (total_power() > power_budget * (1.0 + tolerance) + tolerance)
    throw std::invalid_argument("radiated power exceeds the feed power");
}

RhsConfig RhsConfig::from_aperture(double aperture_length, double element_spacing, double carrier_frequency,
                                   double reference_index, double feed_power) {
  if (!(aperture_length >= 0.0) || !(element_spacing > 0.0))
    throw std::invalid_argument("aperture length must be >= 0 and spacing > 0");
  RhsConfig cfg;
  cfg.element_count = static_cast<std::size_t>(std::llround(aperture_length / element_spacing)) + 1;
  cfg.element_spacing = element_spacing;
  cfg.carrier_frequency = carrier_frequency;
  cfg.reference_index = reference_index;
  cfg.feed_power = feed_power;
  cfg.validate();
  return cfg;
}

std::vector<double> RhsConfig::element_positions() const {
  std::vector<double> x(element_count);
  for (std::size_t n = 0; n < element_count; ++n) x[n] = element_position(n);
  return x;
}

double RhsConfig::reference_phase(std::size_t n) const {
  return -reference_wavenumber() * (element_position(n) - feed_position);
}

void RhsConfig::validate() const {
  if (element_count < 1) throw std::invalid_argument("RHS needs at least one element");
  if (!(element_spacing > 0.0)) throw std::invalid_argument("element spacing must be positive");
  if (!(carrier_frequency > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
  if (!(feed_power > 0.0)) throw std::invalid_argument("feed power must be positive");
  if (!(reference_index >= 1.0)) throw std::invalid_argument("reference index must be >= 1");
  if (!std::isfinite(feed_position)) throw std::invalid_argument("feed position must be finite");
}

double EquivalentExcitation::budget_usage() const {
  double sum = 0.0;
  for (std::size_t n = 0; n < amplitudes.size(); ++n)
    if (activation[n]) sum += amplitudes[n] * amplitudes[n];
  return equivalent_ratio * sum;
}

ApertureExcitation radiate_sequential(const RhsConfig& cfg, const SequentialExcitation& exc) {
  cfg.validate();
  check_length(cfg, exc.radiation_ratios.size());
  std::vector<double> amplitude(exc.radiation_ratios.size());
  double remaining = 1.0; // prod_{k<n} (1 - eta_k)
  for (std::size_t n = 0; n < amplitude.size(); ++n) {
    const double eta = exc.radiation_ratios[n];
    require_ratio(eta, "radiation ratio");
    amplitude[n] = std::sqrt(remaining * eta);
    remaining *= 1.0 - eta;
  }
  return with_reference_phase(cfg, amplitude);
}

ApertureExcitation radiate_equivalent(const RhsConfig& cfg, const EquivalentExcitation& exc) {
  cfg.validate();
  check_length(cfg, exc.amplitudes.size());
  check_length(cfg, exc.activation.size());
  require_ratio(exc.equivalent_ratio, "equivalent ratio");
  for (std::size_t n = 0; n < exc.amplitudes.size(); ++n) {
    require_ratio(exc.amplitudes[n], "amplitude");
    if (exc.activation[n] > 1) throw std::invalid_argument("activation must be 0 or 1");
  }
  const double usage = exc.budget_usage();
  if (usage > 1.0 + 1e-12) throw std::invalid_argument("equivalent excitation exceeds the power budget");
  if (!(usage > 0.0)) throw std::invalid_argument("degenerate excitation: no element radiates");

  const double root_eq = std::sqrt(exc.equivalent_ratio);
  std::vector<double> amplitude(exc.amplitudes.size());
  for (std::size_t n = 0; n < amplitude.size(); ++n)
    amplitude[n] = exc.activation[n] ? root_eq * exc.amplitudes[n] : 0.0;
  return with_reference_phase(cfg, amplitude);
}

EquivalentExcitation sequential_to_equivalent(const SequentialExcitation& exc) {
  const auto& eta = exc.radiation_ratios;
  std::vector<double> m(eta.size());
  double remaining = 1.0;
  for (std::size_t n = 0; n < eta.size(); ++n) {
    require_ratio(eta[n], "radiation ratio");
    m[n] = std::sqrt(remaining * eta[n]);
    remaining *= 1.0 - eta[n];
  }
  const double peak = m.empty() ? 0.0 : *std::max_element(m.begin(), m.end());
  if (!(peak > 0.0)) throw std::invalid_argument("degenerate excitation: no element radiates");

  EquivalentExcitation out;
  out.amplitudes.resize(m.size());
  out.activation.assign(m.size(), 1);
  double sum_sq = 0.0;
  for (std::size_t n = 0; n < m.size(); ++n) {
    out.amplitudes[n] = m[n] / peak;
    sum_sq += out.amplitudes[n] * out.amplitudes[n];
  }
  out.equivalent_ratio = 1.0 / sum_sq;
  return out;
}

SequentialExcitation equivalent_to_sequential(const EquivalentExcitation& exc) {
  if (exc.amplitudes.size() != exc.activation.size())
    throw std::invalid_argument("amplitude and activation lengths differ");
  const std::size_t n_el = exc.amplitudes.size();
  std::vector<double> share(n_el, 0.0);
  for (std::size_t n = 0; n < n_el; ++n)
    if (exc.activation[n]) share[n] = exc.equivalent_ratio * exc.amplitudes[n] * exc.amplitudes[n];

  // Power still guided at element n is leftover + sum_{k>=n} share_k. Summing
  // the tail backwards avoids the cancellation in 1 - sum_{k<n} share_k.
  std::vector<double> tail(n_el + 1, 0.0);
  for (std::size_t n = n_el; n-- > 0;) tail[n] = tail[n + 1] + share[n];
  double leftover = 1.0 - tail[0];
  if (leftover < -1e-12) throw std::domain_error("equivalent excitation exceeds the power budget");
  if (std::abs(leftover) <= 1e-12) leftover = 0.0;

  SequentialExcitation out;
  out.radiation_ratios.assign(n_el, 0.0);
  for (std::size_t n = 0; n < n_el; ++n) {
    if (share[n] == 0.0) continue;
    out.radiation_ratios[n] = std::min(1.0, share[n] / (leftover + tail[n]));
  }
  return out;
}

} // namespace holoairy
