// SPDX-License-Identifier: Apache-2.0
//
// Received-power maximisation over the trajectory offset c. The parabola is
// pinned to the user and to one obstacle point, so (a, b) follow from c. A
// closed-form diffraction score seeds a bidirectional local search whose
// objective is the fully propagated received power.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "holoairy/aperture.hpp"
#include "holoairy/propagation.hpp"
#include "holoairy/rhs_model.hpp"
#include "holoairy/trajectory.hpp"

namespace holoairy {

struct OptimizerSettings {
  double waist = 0.0;            // Gaussian waist of the decay-region source [m]; 0 -> 2 lambda
  double step = 0.0;             // delta_c for the local search [m]; 0 -> element spacing
  double grid_step = 0.0;        // resolution of the c_est grid [m]; 0 -> l_RHS / 200
  double clearance = 0.01;       // outward shift of the circumvention corner [m]
  std::size_t min_active = 8;    // minimum active elements for a usable offset

  // Fills the zero defaults from the aperture.
  OptimizerSettings resolved(const RhsConfig& cfg) const;
};

struct GeometricEstimate {
  double c = 0.0;
  double a = 0.0;
  double b = 0.0;
  double z_max = 0.0;
  double x_max = 0.0;
  double distance = 0.0; // d_r
  double angle = 0.0;    // theta_r [rad]
  double score = 0.0;    // Lambda(c)
  double waist = 0.0;
};

// Lambda(c) = (lambda / (4 pi d_r))^2 exp(-2 pi^2 waist^2 theta_r^2 / lambda^2).
// Throws std::domain_error when c is not a usable offset or z_max >= z_r.
GeometricEstimate estimate_score(Point user, Point obstacle, double c, const RhsConfig& cfg,
                                 const OptimizerSettings& settings);

// Usable offset: constraint c <= l (a > 0) / c >= 0 (a < 0), at least
// `min_active` active elements, and a non-degenerate parabola.
bool offset_admissible(Point user, Point obstacle, double c, const RhsConfig& cfg, std::size_t min_active);

// Dense grid search of Lambda over [0, l_RHS] at settings.grid_step. Throws
// std::domain_error when no grid point is admissible.
GeometricEstimate estimate_offset(Point user, Point obstacle, const RhsConfig& cfg,
                                  const OptimizerSettings& settings);

struct SearchSample {
  double c = 0.0;
  double power = 0.0;
};

struct LocalSearchResult {
  double c_best = 0.0;
  double power_best = 0.0;
  double c_down = 0.0; // local maximum found marching down
  double power_down = 0.0;
  double c_up = 0.0;   // local maximum found marching up
  double power_up = 0.0;
  std::vector<SearchSample> trace; // evaluation order: start, downward leg, upward leg
};

// Bidirectional march on the grid c_start + k * step. Each leg continues while
// the new power is >= the best so far on that leg and `admissible` holds; it
// stops at the first decrease or inadmissible candidate. Returns the better of
// the two leg maxima (ties keep the downward leg).
LocalSearchResult bidirectional_search(double c_start, double step, const std::function<bool(double)>& admissible,
                                       const std::function<double(double)>& power);

struct TraceRow {
  double c = 0.0;
  double a = 0.0;
  double b = 0.0;
  double z_max = 0.0;
  double distance = 0.0;
  double angle = 0.0;
  double score = 0.0;
  double power = 0.0;
};

struct OptimizationResult {
  double c_opt = 0.0;
  std::optional<Trajectory> trajectory;
  ApertureExcitation excitation;
  double power_opt = 0.0;
  double c_est = 0.0;
  double power_est = 0.0;
  GeometricEstimate estimate;
  LocalSearchResult search;
  std::vector<TraceRow> trace;
};

// Received power of the RHS curved beam for offset c (pinned to user/obstacle).
using PowerEvaluator = std::function<double(const ApertureExcitation&)>;

// Geometry-based trajectory optimisation: c_est from Lambda, then the
// bidirectional local search on the true received power.
OptimizationResult optimize_trajectory(Point user, Point obstacle, const RhsConfig& cfg,
                                       const OptimizerSettings& settings, const PowerEvaluator& evaluate);

// Convenience overload that propagates through `scene` on `grid`.
OptimizationResult optimize_trajectory(Point user, Point obstacle, const RhsConfig& cfg, const Scene& scene,
                                       const GridSpec& grid, const ReceiverModel& rx,
                                       const OptimizerSettings& settings, const PropagationOptions& options = {});

// True when every aperture-to-user segment crosses an obstacle with alpha < 1.
// The aperture is sampled at its element positions.
bool line_of_sight_blocked(const Scene& scene, const std::vector<double>& aperture_points);

// Obstacle corner to wrap around: the downstream face (z + length_z) of the
// blocking obstacle, on the side nearest x_r, pushed out by `clearance`.
// Ties go to the negative-x side. Throws std::domain_error when the receiver
// is not fully blocked.
Point pick_circumvention_point(const Scene& scene, const std::vector<double>& aperture_points, double clearance);

} // namespace holoairy
