// SPDX-License-Identifier: Apache-2.0
//
// Aperture excitations for curved (Airy-type) and focused beams.
//
// Phase convention: fields carry exp(-j k r) for outgoing waves, so a ray
// leaving the aperture with transverse direction sin(theta) needs a local
// field phase gradient of -k sin(theta). The caustic phase profile is defined
// with the opposite sign (d(phi)/dx = +k sin(theta)); every beamformer here
// therefore launches the field exp(-j phi(x)).

#pragma once

#include <cstddef>
#include <vector>

#include "holoairy/aperture.hpp"
#include "holoairy/rhs_model.hpp"
#include "holoairy/trajectory.hpp"

namespace holoairy {

// Phase-only uniform linear array used as the conventional baseline.
struct UlaConfig {
  std::size_t element_count = 0;
  double element_spacing = 0.0;   // [m]
  double carrier_frequency = 0.0; // [Hz]
  double feed_power = 1.0;        // P_t [W]

  // N_pa = floor(l / spacing) + 1 elements from x = 0.
  static UlaConfig over_aperture(double aperture_length, double element_spacing,
                                 double carrier_frequency, double feed_power = 1.0);

  double wavenumber() const { return wavenumber_for(carrier_frequency); }
  double aperture_length() const { return element_spacing * static_cast<double>(element_count - 1); }
  std::vector<double> element_positions() const;
  void validate() const;
};

// Holographic amplitude rule: the element amplitude is (cos(dPhi) + 1)/2 where
// dPhi is the difference between the target field phase and the reference-wave
// phase. Elements outside `active` are switched off and eta_eq saturates the
// budget, so the radiated power is P_t whenever any element is active.
EquivalentExcitation holographic_excitation(const RhsConfig& cfg, const std::vector<double>& target_phase,
                                            const std::vector<std::uint8_t>& active);

// Curved beam from the RHS. Elements with a (c - x_n) >= 0 are active.
// Throws std::domain_error when the active interval holds fewer than
// `min_active` elements.
ApertureExcitation airy_rhs(const RhsConfig& cfg, const Trajectory& traj, std::size_t min_active = 8);

// Curved beam from a phase-only ULA with uniform amplitude sqrt(P_t/N_pa).
// Elements the trajectory does not cover keep phase 0 and still radiate.
ApertureExcitation airy_ula(const UlaConfig& ula, const Trajectory& traj);

// Near-field focusing on `target` (z_t > 0): target field phase +k_f r_n.
ApertureExcitation focused_rhs(const RhsConfig& cfg, Point target);
ApertureExcitation focused_ula(const UlaConfig& ula, Point target);

} // namespace holoairy
