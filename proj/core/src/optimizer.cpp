// SPDX-License-Identifier: Apache-2.0

#include "holoairy/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "holoairy/beamformer.hpp"

namespace holoairy {

OptimizerSettings OptimizerSettings::resolved(const RhsConfig& cfg) const {
  OptimizerSettings out = *this;
  if (!(out.waist > 0.0)) out.waist = 2.0 * cfg.wavelength();
  if (!(out.step > 0.0)) out.step = cfg.element_spacing;
  if (!(out.grid_step > 0.0)) out.grid_step = cfg.aperture_length() / 200.0;
  if (!(out.clearance >= 0.0)) throw std::invalid_argument("clearance must be non-negative");
  return out;
}

bool offset_admissible(Point user, Point obstacle, double c, const RhsConfig& cfg, std::size_t min_active) {
  try {
    const Trajectory traj = solve_ab_from_c(user, obstacle, c);
    const auto fo = feasible_offset(traj.a() > 0.0, c, cfg.aperture_length(), cfg.element_spacing, min_active);
    return fo.feasible && fo.within_offset_bound;
  } catch (const std::exception&) {
    return false;
  }
}

GeometricEstimate estimate_score(Point user, Point obstacle, double c, const RhsConfig& cfg,
                                 const OptimizerSettings& settings) {
  const OptimizerSettings s = settings.resolved(cfg);
  if (!offset_admissible(user, obstacle, c, cfg, s.min_active)) throw std::domain_error("offset is not admissible");
  const Trajectory traj = solve_ab_from_c(user, obstacle, c);

  GeometricEstimate est;
  est.c = c;
  est.a = traj.a();
  est.b = traj.b();
  est.waist = s.waist;
  est.z_max = z_max(traj, cfg.aperture_length());
  if (!(est.z_max < user.z)) throw std::domain_error("z_max reaches the user; decay-region estimate does not apply");
  est.x_max = traj.x_at(est.z_max);

  const double slope = traj.slope_at(est.z_max);
  const double dx = user.x - est.x_max;
  const double dz = user.z - est.z_max;
  est.distance = std::hypot(dx, dz);
  est.angle = std::atan(std::abs((dx - dz * slope) / (dz + slope * dx)));

  const double lambda = cfg.wavelength();
  const double friis = lambda / (4.0 * kPi * est.distance);
  est.score = friis * friis *
              std::exp(-2.0 * kPi * kPi * s.waist * s.waist * est.angle * est.angle / (lambda * lambda));
  return est;
}

GeometricEstimate estimate_offset(Point user, Point obstacle, const RhsConfig& cfg, const OptimizerSettings& settings) {
  const OptimizerSettings s = settings.resolved(cfg);
  const double l = cfg.aperture_length();
  const auto steps = static_cast<std::size_t>(std::floor(l / s.grid_step + 1e-9));
  std::optional<GeometricEstimate> best;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double c = std::min(static_cast<double>(i) * s.grid_step, l);
    try {
      const GeometricEstimate est = estimate_score(user, obstacle, c, cfg, s);
      if (!best || est.score > best->score) best = est;
    } catch (const std::domain_error&) {
    }
  }
  if (!best) throw std::domain_error("no admissible offset on the estimate grid");
  return *best;
}

LocalSearchResult bidirectional_search(double c_start, double step, const std::function<bool(double)>& admissible,
                                       const std::function<double(double)>& power) {
  if (!(step > 0.0)) throw std::invalid_argument("search step must be positive");
  if (!admissible(c_start)) throw std::domain_error("search start is not admissible");

  LocalSearchResult out;
  const double start_power = power(c_start);
  out.trace.push_back({c_start, start_power});

  auto leg = [&](double direction, double& c_best, double& p_best) {
    c_best = c_start;
    p_best = start_power;
    for (std::size_t k = 1;; ++k) {
      const double c = c_start + direction * static_cast<double>(k) * step;
      if (!admissible(c)) break;
      const double p = power(c);
      out.trace.push_back({c, p});
      if (p < p_best) break;
      c_best = c;
      p_best = p;
    }
  };
  leg(-1.0, out.c_down, out.power_down);
  leg(+1.0, out.c_up, out.power_up);

  if (out.power_up > out.power_down) {
    out.c_best = out.c_up;
    out.power_best = out.power_up;
  } else {
    out.c_best = out.c_down;
    out.power_best = out.power_down;
  }
  return out;
}

OptimizationResult optimize_trajectory(Point user, Point obstacle, const RhsConfig& cfg,
                                       const OptimizerSettings& settings, const PowerEvaluator& evaluate) {
  const OptimizerSettings s = settings.resolved(cfg);
  OptimizationResult result;
  result.estimate = estimate_offset(user, obstacle, cfg, s);
  result.c_est = result.estimate.c;

  auto admissible = [&](double c) { return offset_admissible(user, obstacle, c, cfg, s.min_active); };
  auto power = [&](double c) { return evaluate(airy_rhs(cfg, solve_ab_from_c(user, obstacle, c), s.min_active)); };
  result.search = bidirectional_search(result.c_est, s.step, admissible, power);

  result.power_est = result.search.trace.front().power;
  result.c_opt = result.search.c_best;
  result.power_opt = result.search.power_best;
  result.trajectory = solve_ab_from_c(user, obstacle, result.c_opt);
  result.excitation = airy_rhs(cfg, *result.trajectory, s.min_active);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& sample : result.search.trace) {
    const Trajectory traj = solve_ab_from_c(user, obstacle, sample.c);
    TraceRow row{sample.c, traj.a(), traj.b(), nan, nan, nan, nan, sample.power};
    try {
      const GeometricEstimate est = estimate_score(user, obstacle, sample.c, cfg, s);
      row.z_max = est.z_max;
      row.distance = est.distance;
      row.angle = est.angle;
      row.score = est.score;
    } catch (const std::domain_error&) {
      row.z_max = z_max(traj, cfg.aperture_length());
    }
    result.trace.push_back(row);
  }
  return result;
}

OptimizationResult optimize_trajectory(Point user, Point obstacle, const RhsConfig& cfg, const Scene& scene,
                                       const GridSpec& grid, const ReceiverModel& rx,
                                       const OptimizerSettings& settings, const PropagationOptions& options) {
  const AsmPropagator propagator(grid, cfg.wavenumber(), scene.effective_plane_spacing());
  auto evaluate = [&](const ApertureExcitation& exc) {
    return received_power(propagate(exc, scene, propagator, options).final_slice, rx, scene.receiver.x);
  };
  return optimize_trajectory(user, obstacle, cfg, settings, evaluate);
}

namespace {

// Liang-Barsky clip of the segment p0 -> p1 against the closed rectangle.
bool segment_hits(Point p0, Point p1, const Obstacle& ob) {
  const double dx = p1.x - p0.x;
  const double dz = p1.z - p0.z;
  double t0 = 0.0;
  double t1 = 1.0;
  const double p[4] = {-dx, dx, -dz, dz};
  const double q[4] = {p0.x - ob.x, ob.x + ob.width_x - p0.x, p0.z - ob.z, ob.z + ob.length_z - p0.z};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0)
      t0 = std::max(t0, t);
    else
      t1 = std::min(t1, t);
    if (t0 > t1) return false;
  }
  return true;
}

std::vector<std::size_t> blocking_counts(const Scene& scene, const std::vector<double>& aperture_points,
                                         bool& all_blocked) {
  std::vector<std::size_t> counts(scene.obstacles.size(), 0);
  all_blocked = !aperture_points.empty();
  for (double xa : aperture_points) {
    bool blocked = false;
    for (std::size_t o = 0; o < scene.obstacles.size(); ++o) {
      if (scene.obstacles[o].attenuation >= 1.0) continue;
      if (segment_hits({xa, 0.0}, scene.receiver, scene.obstacles[o])) {
        ++counts[o];
        blocked = true;
      }
    }
    all_blocked = all_blocked && blocked;
  }
  return counts;
}

} // namespace

bool line_of_sight_blocked(const Scene& scene, const std::vector<double>& aperture_points) {
  bool all_blocked = false;
  blocking_counts(scene, aperture_points, all_blocked);
  return all_blocked;
}

Point pick_circumvention_point(const Scene& scene, const std::vector<double>& aperture_points, double clearance) {
  bool all_blocked = false;
  const auto counts = blocking_counts(scene, aperture_points, all_blocked);
  if (!all_blocked) throw std::domain_error("receiver has line of sight to the aperture; no circumvention needed");

  const auto it = std::max_element(counts.begin(), counts.end());
  const Obstacle& ob = scene.obstacles[static_cast<std::size_t>(it - counts.begin())];
  const double to_left = std::abs(scene.receiver.x - ob.x);
  const double to_right = std::abs(scene.receiver.x - (ob.x + ob.width_x));
  const double z = ob.z + ob.length_z;
  if (to_right < to_left - 1e-12) return {ob.x + ob.width_x + clearance, z};
  return {ob.x - clearance, z};
}

} // namespace holoairy
