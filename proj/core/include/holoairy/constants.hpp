// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <numbers>

namespace holoairy {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;   // m/s
inline constexpr double kFreeSpaceImpedance = 376.730; // ohm

inline double wavenumber_for(double frequency_hz) { return 2.0 * kPi * frequency_hz / kSpeedOfLight; }
inline double wavelength_for(double frequency_hz) { return kSpeedOfLight / frequency_hz; }

// Point in the (x, z) propagation plane, meters.
struct Point {
  double x = 0.0;
  double z = 0.0;
};

} // namespace holoairy
