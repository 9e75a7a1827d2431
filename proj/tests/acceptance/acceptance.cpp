// SPDX-License-Identifier: Apache-2.0
//
// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "holoairy/beamformer.hpp"
#include "holoairy/experiments.hpp"
#include "holoairy/optimizer.hpp"
#include "holoairy/propagation.hpp"
#include "holoairy/rhs_model.hpp"
#include "holoairy/scenario.hpp"
#include "holoairy/trajectory.hpp"

using namespace holoairy;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double db(double p) { return 10.0 * std::log10(p); }

// Received power for RHS curved beams on one scenario, memoised on c.
class PowerCache {
public:
  PowerCache(const Scenario& s, Point anchor) : s_(s), anchor_(anchor) {}
  double operator()(double c) {
    const auto key = std::llround(c * 1e9);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double p =
        s_.power_of(airy_rhs(s_.rhs, solve_ab_from_c(s_.scene.receiver, anchor_, c), s_.optimizer.min_active));
    cache_.emplace(key, p);
    return p;
  }
  bool admissible(double c) const {
    return offset_admissible(s_.scene.receiver, anchor_, c, s_.rhs, s_.optimizer.min_active);
  }

private:
  const Scenario& s_;
  Point anchor_;
  std::map<long long, double> cache_;
};

void model_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::size_t> size(1, 256);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_direct = 0.0, worst_round = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    RhsConfig cfg;
    cfg.element_count = size(rng);
    cfg.element_spacing = 3e-4;
    cfg.carrier_frequency = 100e9;
    SequentialExcitation seq;
    seq.radiation_ratios.resize(cfg.element_count);
    for (auto& eta : seq.radiation_ratios) eta = unit(rng);

    const EquivalentExcitation eq = sequential_to_equivalent(seq);
    const SequentialExcitation back = equivalent_to_sequential(eq);
    const auto f_eq = radiate_equivalent(cfg, eq);
    const auto f_back = radiate_sequential(cfg, back);
    const auto f_seq = radiate_sequential(cfg, seq);

    double peak_eq = 0.0, peak_seq = 0.0, num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < cfg.element_count; ++n) {
      peak_eq = std::max(peak_eq, std::abs(f_eq.weights[n]));
      peak_seq = std::max(peak_seq, std::abs(f_seq.weights[n]));
      num += std::real(std::conj(f_back.weights[n]) * f_seq.weights[n]);
      den += std::norm(f_back.weights[n]);
    }
    const double scale = num / den;
    for (std::size_t n = 0; n < cfg.element_count; ++n) {
      worst_direct = std::max(worst_direct, std::abs(f_back.weights[n] - f_eq.weights[n]) / peak_eq);
      worst_round = std::max(worst_round, std::abs(scale * f_back.weights[n] - f_seq.weights[n]) / peak_seq);
    }
  }
  const double t = seconds_since(t0);
  report(1, "model_equivalence", worst_direct <= 1e-12 && worst_round <= 1e-12 && t < 5.0,
         "max_err_equivalent=" + fmt("%.3g", worst_direct) + " max_err_round_trip=" + fmt("%.3g", worst_round) +
             " time_s=" + fmt("%.3f", t));
}

void phase_profile_check() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mag(0.05, 5.0), slope(-1.0, 1.0), offset(-0.2, 0.4), depth(0.005, 0.2);
  std::bernoulli_distribution sign(0.5);
  const double k = wavenumber_for(100e9);
  double worst_fd = 0.0, worst_tangent = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a = sign(rng) ? mag(rng) : -mag(rng);
    const Trajectory traj(a, slope(rng), offset(rng));
    const double x = traj.c() - (a > 0.0 ? 1.0 : -1.0) * depth(rng);
    const double h = 1e-5 * std::abs(traj.c() - x);
    auto phi = [&](double u) { return phase_profile(traj, k, u); };
    const double fd = (-phi(x + 2 * h) + 8 * phi(x + h) - 8 * phi(x - h) + phi(x - 2 * h)) / (12 * h);
    const double z0 = tangent_point(traj, x);
    const double fp = traj.slope_at(z0);
    const double expected = k * fp / std::sqrt(1.0 + fp * fp);
    worst_fd = std::max(worst_fd, std::abs(fd - expected) / std::abs(expected));
    worst_tangent = std::max(worst_tangent, std::abs(traj.x_at(z0) - z0 * fp - x));
  }
  report(2, "phase_profile", worst_fd <= 1e-5 && worst_tangent <= 1e-12,
         "max_rel_derivative_err=" + fmt("%.3g", worst_fd) + " max_tangent_identity_err=" + fmt("%.3g", worst_tangent));
}

void propagator_oracle() {
  const auto t0 = Clock::now();
  const double f = 100e9;
  const double k = wavenumber_for(f);
  const double lambda = wavelength_for(f);
  const GridSpec grid{-256 * lambda / 4.0, lambda / 4.0, 512};
  FieldSlice in;
  in.grid = grid;
  const double w0 = 0.01;
  for (std::size_t i = 0; i < grid.count; ++i) in.values.push_back(std::exp(-std::pow(grid.x(i) / w0, 2)));

  const FieldSlice asm_out = asm_step(in, 0.1, k);
  const FieldSlice rs_out = rs_direct(in, 0.1, k, RsKernel::Cylindrical);
  double num = 0.0, den = 0.0;
  for (std::size_t i = grid.count / 4; i < 3 * grid.count / 4; ++i) {
    num += std::norm(asm_out.values[i] - rs_out.values[i]);
    den += std::norm(rs_out.values[i]);
  }
  const double l2 = std::sqrt(num / den);

  const AsmPropagator prop(grid, k, 1e-3);
  std::vector<cplx> v = in.values;
  const double e0 = prop.propagating_energy(v);
  for (int s = 0; s < 100; ++s) prop.step(v);
  double e1 = 0.0;
  for (const auto& x : v) e1 += std::norm(x);
  const double drift = std::abs(e1 - e0) / e0;
  const double t = seconds_since(t0);
  report(3, "propagator_oracle", l2 < 1e-3 && drift <= 1e-6 && t < 30.0,
         "rel_l2_central=" + fmt("%.3g", l2) + " energy_drift=" + fmt("%.3g", drift) + " time_s=" + fmt("%.3f", t));
}

void anchoring(const Scenario& s, Point anchor) {
  double worst = 0.0;
  int count = 0;
  for (double c : linear_range(-0.2, 0.4, 1e-3)) {
    try {
      const Trajectory traj = solve_ab_from_c(s.scene.receiver, anchor, c);
      worst = std::max({worst, std::abs(traj.x_at(s.scene.receiver.z) - s.scene.receiver.x),
                        std::abs(traj.x_at(anchor.z) - anchor.x)});
      ++count;
    } catch (const std::domain_error&) {
    }
  }
  report(4, "anchoring", worst < 1e-9 && count > 0,
         "offsets=" + std::to_string(count) + " max_residual=" + fmt("%.3g", worst));
}

void offset_sweep(const Scenario& s, Point anchor) {
  const auto t0 = Clock::now();
  const double l = s.rhs.aperture_length();
  const Table table = run_sweep(s, {SweepKind::OffsetC, linear_range(-l, 2.0 * l, l / 100.0)}, 1);
  double worst_gap = 0.0, best_rhs = 0.0, best_rhs_c = 0.0;
  int compared = 0;
  for (const auto& row : table.rows) {
    const double c = row[0];
    const bool rhs_ok = row[5] == 1.0;
    if (rhs_ok && row[8] > best_rhs) {
      best_rhs = row[8];
      best_rhs_c = c;
    }
    if (rhs_ok && (c <= 0.0 || c >= l) && !std::isnan(row[9])) {
      worst_gap = std::max(worst_gap, std::abs(db(row[8]) - db(row[9])));
      ++compared;
    }
  }
  const UlaBest ula = best_ula_offset(s, anchor);
  const double margin = db(best_rhs) - db(ula.power);
  const double t = seconds_since(t0);
  report(5, "offset_sweep_rhs_vs_ula", compared > 0 && worst_gap <= 1.0 && margin >= 10.0 && t < 600.0,
         "outside_points=" + std::to_string(compared) + " max_gap_db=" + fmt("%.3f", worst_gap) +
             " best_rhs_db=" + fmt("%.3f", db(best_rhs)) + " at_c=" + fmt("%.4f", best_rhs_c) +
             " best_ula_db=" + fmt("%.3f", db(ula.power)) + " at_c=" + fmt("%.4f", ula.c) +
             " margin_db=" + fmt("%.3f", margin) + " time_s=" + fmt("%.1f", t));
}

void curved_vs_focused(const Scenario& base) {
  const Scenario s = base.with_user({base.scene.receiver.x, 2.3});
  const auto curved = run_single(s, BeamKind::AiryRhs);
  const auto focused = run_single(s, BeamKind::Focused);
  const double margin = db(curved.power) - db(focused.power);
  report(6, "curved_vs_focused", curved.power > focused.power,
         "z_r=2.3 curved_db=" + fmt("%.3f", db(curved.power)) + " focused_db=" + fmt("%.3f", db(focused.power)) +
             " margin_db=" + fmt("%.3f", margin));
}

struct PositionRun {
  double z = 0.0;
  Scenario scenario;
  Point anchor;
  OptimizationResult opt;
};

void search_vs_dense(std::vector<PositionRun>& runs) {
  bool pass = true;
  std::string detail;
  for (auto& run : runs) {
    const Scenario& s = run.scenario;
    PowerCache power(s, run.anchor);
    const double step = s.optimizer.step;
    const auto& opt = run.opt;

    // local maximum on the step grid
    bool local = true;
    for (double c : {opt.c_opt - step, opt.c_opt + step})
      if (power.admissible(c) && power(c) > opt.power_opt) local = false;

    // trace legs: monotone until the stopping sample, bounded length
    const auto& trace = opt.search.trace;
    bool monotone = true;
    double best = trace.front().power;
    std::size_t i = 1;
    for (int dir : {-1, +1}) {
      best = trace.front().power;
      bool stopped = false;
      for (; i < trace.size() && (trace[i].c - trace.front().c) * dir > 0.0; ++i) {
        if (stopped) monotone = false;
        if (trace[i].power < best)
          stopped = true;
        else
          best = trace[i].power;
      }
    }
    const double l = s.rhs.aperture_length();
    const bool bounded = trace.size() <= static_cast<std::size_t>(std::ceil(l / step)) + 3;

    // dense sweep around c_est at half the step
    std::vector<double> cs, ps;
    for (double c : linear_range(opt.c_est - 0.03, opt.c_est + 0.03, step / 2.0))
      if (power.admissible(c)) {
        cs.push_back(c);
        ps.push_back(power(c));
      }
    double nearest_c = opt.c_est, nearest_p = 0.0, nearest_gap = 1e300;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      const bool left = j == 0 || ps[j] >= ps[j - 1];
      const bool right = j + 1 == cs.size() || ps[j] >= ps[j + 1];
      if (left && right && std::abs(cs[j] - opt.c_est) < nearest_gap) {
        nearest_gap = std::abs(cs[j] - opt.c_est);
        nearest_c = cs[j];
        nearest_p = ps[j];
      }
    }
    const double gap_db = std::abs(db(opt.power_opt) - db(nearest_p));
    const bool ok = local && monotone && bounded && nearest_p > 0.0 && gap_db <= 0.5;
    pass = pass && ok;
    detail += " z=" + fmt("%.3f", run.z) + "(c_est=" + fmt("%.4f", opt.c_est) + ",c_opt=" + fmt("%.4f", opt.c_opt) +
              ",dense_c=" + fmt("%.4f", nearest_c) + ",gap_db=" + fmt("%.3f", gap_db) +
              ",evals=" + std::to_string(trace.size()) + (ok ? ")" : ",bad)");
  }
  report(7, "local_search_vs_dense", pass, detail.substr(1));
}

void decay_region(const std::vector<PositionRun>& runs) {
  bool pass = true;
  double worst_origin = 0.0;
  int count = 0;
  for (const auto& run : runs) {
    const double l = run.scenario.rhs.aperture_length();
    for (const auto& sample : run.opt.search.trace) {
      const Trajectory traj = solve_ab_from_c(run.scenario.scene.receiver, run.anchor, sample.c);
      const double zm = z_max(traj, l);
      if (!(zm < run.z)) pass = false;
      const double origin = traj.x_at(zm) - zm * traj.slope_at(zm);
      worst_origin = std::max(worst_origin, std::abs(origin - farthest_ray_origin(traj, l)));
      ++count;
    }
  }
  pass = pass && worst_origin <= 1e-12;
  report(8, "decay_region_geometry", pass,
         "candidates=" + std::to_string(count) + " max_origin_err=" + fmt("%.3g", worst_origin));
}

void spacing_order(const Scenario& base, const std::vector<PositionRun>& runs) {
  ScenarioConfig coarse_cfg = base.config;
  coarse_cfg.rhs_spacing_wavelengths = 0.2;
  coarse_cfg.noise_power = base.receiver.noise_power;
  Scenario coarse = resolve(coarse_cfg);
  coarse.grid = base.grid;
  bool pass = true;
  std::string detail;
  for (const auto& run : runs) {
    const double fine = achievable_rate(run.opt.power_opt, run.scenario.receiver);
    const Scenario sc = coarse.with_user(run.scenario.scene.receiver);
    const auto opt = optimize_trajectory(sc.scene.receiver, run.anchor, sc.rhs, sc.optimizer,
                                         [&](const ApertureExcitation& e) { return sc.power_of(e); });
    const double mid = achievable_rate(opt.power_opt, sc.receiver);
    const double ula = achievable_rate(best_ula_offset(run.scenario, run.anchor).power, run.scenario.receiver);
    const bool ok = fine >= mid && mid >= ula;
    pass = pass && ok;
    detail += " z=" + fmt("%.3f", run.z) + "(" + fmt("%.4f", fine) + "," + fmt("%.4f", mid) + "," +
              fmt("%.4f", ula) + (ok ? ")" : ",bad)");
  }
  report(9, "spacing_rate_order", pass, "rates[lambda/10,lambda/5,ula]:" + detail);
}

void parameter_trends(const Scenario& base, Point anchor) {
  struct Row {
    double z;
    std::vector<double> abs_a, d_r, theta;
  };
  std::vector<Row> rows;
  for (double z : linear_range(1.6, 2.3 + 1e-9, 0.1)) {
    const Scenario s = base.with_user({base.scene.receiver.x, z});
    PowerCache power(s, anchor);
    const auto opt = optimize_trajectory(s.scene.receiver, anchor, s.rhs, s.optimizer,
                                         [&](const ApertureExcitation& e) { return s.power_of(e); });
    Row row{z, {}, {}, {}};
    for (double c : {opt.c_opt - s.optimizer.step, opt.c_opt, opt.c_opt + s.optimizer.step}) {
      try {
        const auto est = estimate_score(s.scene.receiver, anchor, c, s.rhs, s.optimizer);
        row.abs_a.push_back(std::abs(est.a));
        row.d_r.push_back(est.distance);
        row.theta.push_back(est.angle);
      } catch (const std::domain_error&) {
      }
    }
    rows.push_back(row);
  }
  auto trend_ok = [&](auto member) {
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      const auto& cur = rows[i].*member;
      const auto& next = rows[i + 1].*member;
      if (cur.empty() || next.empty()) return false;
      if (*std::min_element(next.begin(), next.end()) > *std::max_element(cur.begin(), cur.end())) return false;
    }
    return true;
  };
  const bool a_ok = trend_ok(&Row::abs_a);
  const bool d_ok = trend_ok(&Row::d_r);
  const bool t_ok = trend_ok(&Row::theta);
  std::string detail = std::string("abs_a:") + (a_ok ? "ok" : "bad") + " d_r:" + (d_ok ? "ok" : "bad") +
                       " theta_r:" + (t_ok ? "ok" : "bad");
  for (const auto& r : rows)
    if (r.abs_a.size() == 3)
      detail += " z=" + fmt("%.1f", r.z) + "(|a|=" + fmt("%.4f", r.abs_a[1]) + ",d_r=" + fmt("%.4f", r.d_r[1]) +
                ",theta=" + fmt("%.4f", r.theta[1]) + ")";
  report(10, "parameter_trends", a_ok && d_ok && t_ok, detail);
}

} // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number; default runs all of them.
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  auto wanted = [&](int id) { return selected.empty() || std::find(selected.begin(), selected.end(), id) != selected.end(); };

  const Scenario base = resolve(ScenarioConfig{});
  const Point anchor = pick_circumvention_point(base.scene, base.rhs.element_positions(), base.optimizer.clearance);

  auto guarded = [&](int id, const char* name, const std::function<void()>& check) {
    if (!wanted(id)) return;
    try {
      check();
    } catch (const std::exception& e) {
      report(id, name, false, std::string("exception: ") + e.what());
    }
  };

  guarded(1, "model_equivalence", model_equivalence);
  guarded(2, "phase_profile", phase_profile_check);
  guarded(3, "propagator_oracle", propagator_oracle);
  guarded(4, "anchoring", [&] { anchoring(base, anchor); });
  guarded(5, "offset_sweep_rhs_vs_ula", [&] { offset_sweep(base, anchor); });
  guarded(6, "curved_vs_focused", [&] { curved_vs_focused(base); });

  std::vector<PositionRun> runs;
  if (wanted(7) || wanted(8) || wanted(9)) {
    for (double z : {1.6, 1.8, 2.0, 2.1, 2.3}) {
      const Scenario s = base.with_user({base.scene.receiver.x, z});
      auto opt = optimize_trajectory(s.scene.receiver, anchor, s.rhs, s.optimizer,
                                     [&](const ApertureExcitation& e) { return s.power_of(e); });
      runs.push_back({z, s, anchor, std::move(opt)});
    }
  }
  guarded(7, "local_search_vs_dense", [&] { search_vs_dense(runs); });
  guarded(8, "decay_region_geometry", [&] { decay_region(runs); });
  guarded(9, "spacing_rate_order", [&] { spacing_order(base, runs); });
  guarded(10, "parameter_trends", [&] { parameter_trends(base, anchor); });

  std::printf("SUMMARY %d of %zu criteria failed\n", failures, selected.empty() ? std::size_t{10} : selected.size());
  return failures == 0 ? 0 : 1;
}
