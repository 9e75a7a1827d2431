// SPDX-License-Identifier: Apache-2.0

#include "holoairy/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holoairy {

Trajectory::Trajectory(double a, double b, double c) : a_(a), b_(b), c_(c) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    throw std::invalid_argument("trajectory coefficients must be finite");
  if (a == 0.0) throw std::invalid_argument("trajectory curvature must be non-zero");
}

namespace {

double tangent_depth(const Trajectory& traj, double x) {
  const double ratio = (traj.c() - x) / traj.a();
  if (!traj.covers(x) || ratio < 0.0) throw std::domain_error("aperture point not covered by the trajectory");
  return std::sqrt(ratio);
}

} // namespace

double caustic_slope(const Trajectory& traj, double x) {
  return 2.0 * traj.a() * tangent_depth(traj, x) + traj.b();
}

double phase_profile(const Trajectory& traj, double wavenumber, double x) {
  const double psi = caustic_slope(traj, x);
  return wavenumber / (4.0 * traj.a()) * (std::asinh(psi) + (2.0 * traj.b() - psi) * std::sqrt(psi * psi + 1.0));
}

double tangent_point(const Trajectory& traj, double x) { return tangent_depth(traj, x); }

double farthest_ray_origin(const Trajectory& traj, double aperture_length) {
  return traj.a() > 0.0 ? 0.0 : aperture_length;
}

double z_max(const Trajectory& traj, double aperture_length) {
  const double ratio =
      traj.a() > 0.0 ? traj.c() / traj.a() : (traj.c() - aperture_length) / traj.a();
  if (!(ratio >= 0.0)) throw std::domain_error("offset leaves no aperture point covered");
  return std::sqrt(ratio);
}

Trajectory solve_ab_from_c(Point user, Point obstacle, double c) {
  if (!(user.z > 0.0) || !(obstacle.z > 0.0)) throw std::invalid_argument("anchor depths must be positive");
  if (user.z == obstacle.z) throw std::invalid_argument("anchor points share a depth; system is singular");
  // [z_r^2 z_r; z_o^2 z_o] [a; b] = [x_r - c; x_o - c]
  const double det = user.z * user.z * obstacle.z - obstacle.z * obstacle.z * user.z;
  const double rhs_r = user.x - c;
  const double rhs_o = obstacle.x - c;
  const double a = (rhs_r * obstacle.z - rhs_o * user.z) / det;
  const double b = (user.z * user.z * rhs_o - obstacle.z * obstacle.z * rhs_r) / det;
  if (std::abs(a) < 1e-12) throw std::domain_error("anchors are collinear with the offset; no curvature");
  return Trajectory(a, b, c);
}

OffsetFeasibility feasible_offset(bool positive_curvature, double c, double aperture_length, double element_spacing,
                                  std::size_t min_active) {
  OffsetFeasibility out;
  if (!std::isfinite(c) || !(aperture_length >= 0.0) || !(element_spacing > 0.0)) return out;

  out.within_offset_bound = positive_curvature ? c <= aperture_length : c >= 0.0;
  double lo = 0.0;
  double hi = aperture_length;
  if (positive_curvature)
    hi = std::min(c, aperture_length);
  else
    lo = std::max(c, 0.0);
  out.active_lo = lo;
  out.active_hi = hi;
  if (hi < lo) {
    out.active_lo = out.active_hi = positive_curvature ? 0.0 : aperture_length;
    return out;
  }
  // elements n*d with lo <= n*d <= hi
  const auto last = static_cast<std::size_t>(std::llround(aperture_length / element_spacing));
  const double eps = 1e-9 * element_spacing;
  const auto first_in = static_cast<std::size_t>(std::ceil((lo - eps) / element_spacing));
  const auto last_in = std::min(last, static_cast<std::size_t>(std::floor((hi + eps) / element_spacing)));
  out.active_elements = last_in >= first_in ? last_in - first_in + 1 : 0;
  out.feasible = out.active_elements >= min_active && out.active_elements > 0;
  out.ula_undistorted = positive_curvature ? c >= aperture_length : c <= 0.0;
  return out;
}

} // namespace holoairy
