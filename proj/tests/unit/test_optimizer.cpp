// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "holoairy/optimizer.hpp"

using namespace holoairy;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kFreq = 100e9;
const double kLambda = wavelength_for(kFreq);
const Point kUser{-0.2, 2.4};
const Point kCorner{-0.11, 0.6};

RhsConfig reference_rhs() { return RhsConfig::from_aperture(0.2, kLambda / 10.0, kFreq); }

Scene reference_scene() {
  Scene scene;
  scene.obstacles.push_back({-0.1, 0.5, 0.1, 0.2, 0.0});
  scene.receiver = kUser;
  return scene;
}

} // namespace

TEST_CASE("local search climbs a single peak from either side", "[optimizer]") {
  const double step = 0.01;
  auto power = [](double c) { return std::exp(-std::pow((c - 0.123) / 0.05, 2)); };
  auto anywhere = [](double) { return true; };
  for (double start : {0.0, 0.3, 0.12}) {
    const auto r = bidirectional_search(start, step, anywhere, power);
    const double k_best = std::round((0.123 - start) / step);
    CHECK_THAT(r.c_best, WithinAbs(start + k_best * step, 1e-12));
    // every leg evaluates up to and including the first decrease
    for (std::size_t i = 1; i < r.trace.size(); ++i)
      CHECK_THAT(std::abs(r.trace[i].c - start) / step, WithinAbs(std::round(std::abs(r.trace[i].c - start) / step), 1e-9));
    CHECK(r.trace.front().c == start);
  }
}

TEST_CASE("local search stops at inadmissible offsets", "[optimizer]") {
  std::map<double, int> calls;
  auto power = [&](double c) {
    ++calls[c];
    return c; // increasing: the upward leg runs into the bound
  };
  auto bounded = [](double c) { return c >= 0.0 && c <= 0.05 + 1e-12; };
  const auto r = bidirectional_search(0.02, 0.01, bounded, power);
  CHECK_THAT(r.c_best, WithinAbs(0.05, 1e-12));
  CHECK_THAT(r.c_down, WithinAbs(0.02, 1e-12));
  CHECK(r.trace.size() == 5); // start, one step down, three up
  for (const auto& [c, n] : calls) CHECK(n == 1);
  CHECK_THROWS_AS(bidirectional_search(0.5, 0.01, bounded, power), std::domain_error);
  CHECK_THROWS_AS(bidirectional_search(0.02, 0.0, bounded, power), std::invalid_argument);
}

TEST_CASE("two peaks: the better leg wins, ties go down", "[optimizer]") {
  auto twin = [](double c) { return std::exp(-std::pow((c - 0.1) / 0.02, 2)) + 2.0 * std::exp(-std::pow((c - 0.3) / 0.02, 2)); };
  const auto r = bidirectional_search(0.2, 0.01, [](double) { return true; }, twin);
  CHECK_THAT(r.c_best, WithinAbs(0.3, 1e-9));
  CHECK_THAT(r.c_down, WithinAbs(0.1, 1e-9));

  auto flat = [](double) { return 1.0; };
  const auto plateau = bidirectional_search(0.0, 0.1, [](double c) { return std::abs(c) <= 0.25; }, flat);
  CHECK_THAT(plateau.c_best, WithinAbs(-0.2, 1e-12));
}

TEST_CASE("diffraction score matches a hand evaluation", "[optimizer]") {
  const RhsConfig cfg = reference_rhs();
  OptimizerSettings settings;
  const double c = 0.05;
  const auto est = estimate_score(kUser, kCorner, c, cfg, settings);

  const Trajectory traj = solve_ab_from_c(kUser, kCorner, c);
  const double zm = std::sqrt(c / traj.a());
  const double xm = traj.x_at(zm);
  const double s = 2 * traj.a() * zm + traj.b();
  // angle between the user direction and the tangent, via the dot product
  const double ux = kUser.x - xm, uz = kUser.z - zm;
  const double cos_t = (ux * s + uz) / (std::hypot(ux, uz) * std::hypot(s, 1.0));
  const double theta = std::acos(cos_t);
  const double d = std::hypot(ux, uz);
  const double w = 2 * kLambda;
  const double expected = std::pow(kLambda / (4 * kPi * d), 2) * std::exp(-2 * kPi * kPi * w * w * theta * theta / (kLambda * kLambda));

  CHECK_THAT(est.z_max, WithinRel(zm, 1e-14));
  CHECK_THAT(est.distance, WithinRel(d, 1e-14));
  CHECK_THAT(est.angle, WithinRel(theta, 1e-9));
  CHECK_THAT(est.score, WithinRel(expected, 1e-8));
  CHECK(est.waist == w);

  CHECK_THROWS_AS(estimate_score(kUser, kCorner, 0.3, cfg, settings), std::domain_error);
  CHECK_FALSE(offset_admissible(kUser, kCorner, -0.05, cfg, 8));
  CHECK(offset_admissible(kUser, kCorner, 0.05, cfg, 8));
}

TEST_CASE("estimate is the grid maximiser of the score", "[optimizer]") {
  const RhsConfig cfg = reference_rhs();
  OptimizerSettings settings;
  const auto est = estimate_offset(kUser, kCorner, cfg, settings);
  CHECK(est.c > 0.0);
  CHECK(est.c < cfg.aperture_length());
  const double step = cfg.aperture_length() / 200.0;
  for (int i = 0; i <= 200; ++i) {
    double score = 0.0;
    try {
      score = estimate_score(kUser, kCorner, i * step, cfg, settings).score;
    } catch (const std::domain_error&) {
    }
    CHECK(score <= est.score);
  }
}

TEST_CASE("trajectory optimisation drives a stub evaluator", "[optimizer]") {
  const RhsConfig cfg = reference_rhs();
  OptimizerSettings settings;
  settings.step = 0.002;
  // Prefers an active sub-aperture ending near x = 0.07.
  auto evaluate = [](const ApertureExcitation& exc) {
    double last = 0.0;
    for (std::size_t n = 0; n < exc.size(); ++n)
      if (std::abs(exc.weights[n]) > 0.0) last = exc.positions[n];
    return std::exp(-std::pow((last - 0.07) / 0.03, 2));
  };
  const auto result = optimize_trajectory(kUser, kCorner, cfg, settings, evaluate);
  CHECK_THAT(result.c_opt, WithinAbs(0.07, 0.002));
  REQUIRE(result.trajectory);
  CHECK(result.trajectory->c() == result.c_opt);
  CHECK(result.power_est == result.search.trace.front().power);
  CHECK(result.trace.size() == result.search.trace.size());
  CHECK_THAT(result.power_opt, WithinRel(evaluate(result.excitation), 1e-15));
  for (const auto& row : result.trace) CHECK(row.z_max < kUser.z);
}

TEST_CASE("blocked line of sight and the corner to wrap around", "[optimizer]") {
  const RhsConfig cfg = reference_rhs();
  Scene scene = reference_scene();
  CHECK(line_of_sight_blocked(scene, cfg.element_positions()));
  const Point corner = pick_circumvention_point(scene, cfg.element_positions(), 0.01);
  CHECK_THAT(corner.x, WithinAbs(-0.11, 1e-15));
  CHECK_THAT(corner.z, WithinAbs(0.6, 1e-15));

  scene.receiver = {0.1, 2.4};
  CHECK_FALSE(line_of_sight_blocked(scene, cfg.element_positions()));
  CHECK_THROWS_AS(pick_circumvention_point(scene, cfg.element_positions(), 0.01), std::domain_error);

  scene.obstacles = {{-0.1, 0.5, 0.1, 0.4, 0.0}};
  scene.receiver = {0.35, 2.4};
  const Point right = pick_circumvention_point(scene, cfg.element_positions(), 0.01);
  CHECK_THAT(right.x, WithinAbs(0.31, 1e-15));

  scene.obstacles = {{-0.1, 0.5, 0.1, 0.4, 0.0}};
  scene.receiver = {0.1, 2.4};
  CHECK(pick_circumvention_point(scene, cfg.element_positions(), 0.01).x < 0.0);

  scene.obstacles.front().attenuation = 0.99;
  scene.receiver = kUser;
  CHECK(line_of_sight_blocked(scene, cfg.element_positions()));
}
