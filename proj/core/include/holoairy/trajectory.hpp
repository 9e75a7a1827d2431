// SPDX-License-Identifier: Apache-2.0
//
// Parabolic beam trajectories x = a z^2 + b z + c and the caustic geometry that
// links each aperture coordinate to the point of the parabola its ray touches.

#pragma once

#include <cstddef>

#include "holoairy/constants.hpp"

namespace holoairy {

class Trajectory {
public:
  // Throws std::invalid_argument for a == 0 or non-finite coefficients.
  Trajectory(double a, double b, double c);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

  double x_at(double z) const { return (a_ * z + b_) * z + c_; }
  double slope_at(double z) const { return 2.0 * a_ * z + b_; }

  // a (c - x) >= 0: a ray leaving x can be tangent to the parabola at z >= 0.
  bool covers(double x) const { return a_ * (c_ - x) >= 0.0; }

private:
  double a_;
  double b_;
  double c_;
};

// psi(x) = 2a sqrt((c - x)/a) + b, the parabola slope at the tangent point of x.
double caustic_slope(const Trajectory& traj, double x);

// Aperture phase whose local ray slope reproduces the parabola as a caustic:
// d(phi)/dx = k_f psi / sqrt(1 + psi^2), phi in radians. Throws std::domain_error
// when `x` is not covered by the trajectory.
double phase_profile(const Trajectory& traj, double wavenumber, double x);

// z0 = sqrt((c - x)/a); the tangent at (f(z0), z0) crosses z = 0 exactly at x.
double tangent_point(const Trajectory& traj, double x);

// Aperture coordinate that emits the farthest tangent ray: x = 0 for a > 0 and
// x = l_RHS for a < 0.
double farthest_ray_origin(const Trajectory& traj, double aperture_length);

// Farthest caustic point fed by the aperture [0, l_RHS]. Throws
// std::domain_error when no part of the aperture is covered.
double z_max(const Trajectory& traj, double aperture_length);

// Parabola through `user` and `obstacle` with the given offset c.
// Throws std::invalid_argument for z_r == z_o or non-positive depths and
// std::domain_error when the fit degenerates to a straight line (|a| < 1e-12).
Trajectory solve_ab_from_c(Point user, Point obstacle, double c);

struct OffsetFeasibility {
  bool feasible = false;           // active interval holds at least `min_active` elements
  bool within_offset_bound = false; // c <= l_RHS for a > 0, c >= 0 for a < 0
  double active_lo = 0.0;          // active interval [active_lo, active_hi]
  double active_hi = 0.0;
  std::size_t active_elements = 0;
  bool ula_undistorted = false;    // active interval is the full aperture
};

// Active sub-aperture of [0, l_RHS] for a parabola with curvature sign
// `positive_curvature` and offset c. Elements sit at multiples of
// `element_spacing`. Never throws; infeasible offsets report feasible = false.
OffsetFeasibility feasible_offset(bool positive_curvature, double c, double aperture_length,
                                  double element_spacing, std::size_t min_active = 8);

} // namespace holoairy
