// SPDX-License-Identifier: Apache-2.0
//
// Radiation model of a reconfigurable holographic surface (RHS): a feed launches
// a guided reference wave along a 1-D waveguide and every element taps part of
// the remaining power. Two parameterisations are provided, the sequential
// radiation-ratio form and the equivalent amplitude/activation form, together
// with the conversions between them.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "holoairy/aperture.hpp"
#include "holoairy/constants.hpp"

namespace holoairy {

struct RhsConfig {
  std::size_t element_count = 0;
  double element_spacing = 0.0;   // d [m]
  double carrier_frequency = 0.0; // f [Hz]
  double reference_index = 2.0;   // n_s, reference wavenumber k_s = n_s * k_f
  double feed_power = 1.0;        // P_t [W]
  double feed_position = 0.0;     // x of the feed [m]

  // N = round(length / spacing) + 1 elements starting at x = 0.
  static RhsConfig from_aperture(double aperture_length, double element_spacing,
                                 double carrier_frequency, double reference_index = 2.0,
                                 double feed_power = 1.0);

  double aperture_length() const { return element_spacing * static_cast<double>(element_count - 1); }
  double wavenumber() const { return wavenumber_for(carrier_frequency); }
  double wavelength() const { return wavelength_for(carrier_frequency); }
  double reference_wavenumber() const { return reference_index * wavenumber(); }
  // 0-based index; element n sits at n * d.
  double element_position(std::size_t n) const { return element_spacing * static_cast<double>(n); }
  std::vector<double> element_positions() const;
  // Phase of the guided reference wave at element n: -k_s (x_n - x_feed).
  double reference_phase(std::size_t n) const;

  void validate() const;
};

struct SequentialExcitation {
  std::vector<double> radiation_ratios; // eta_n in [0, 1]
};

struct EquivalentExcitation {
  std::vector<double> amplitudes;        // m_n in [0, 1]
  std::vector<std::uint8_t> activation;  // s_n in {0, 1}
  double equivalent_ratio = 0.0;         // eta_eq

  // eta_eq * sum m_n^2 s_n, must not exceed one.
  double budget_usage() const;
};

ApertureExcitation radiate_sequential(const RhsConfig& cfg, const SequentialExcitation& exc);
ApertureExcitation radiate_equivalent(const RhsConfig& cfg, const EquivalentExcitation& exc);

// m'_n = sqrt(prod_{k<n}(1 - eta_k) eta_n), m = m'/max(m'), s = 1, eta_eq = 1/sum m^2.
// The result saturates the power budget, so only the amplitude profile shape is
// preserved, not the absolute radiated power.
EquivalentExcitation sequential_to_equivalent(const SequentialExcitation& exc);

// eta_n = m_n^2 s_n eta_eq / (1 - eta_eq sum_{k<n} m_k^2 s_k). Exact inverse of the
// radiated field: radiate_sequential(result) == radiate_equivalent(exc).
SequentialExcitation equivalent_to_sequential(const EquivalentExcitation& exc);

} // namespace holoairy
