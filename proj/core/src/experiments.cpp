// SPDX-License-Identifier: Apache-2.0

#include "holoairy/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "holoairy/field_io.hpp"

namespace holoairy {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_db(double p) { return 10.0 * std::log10(p); }

Point anchor_point(const Scenario& s) {
  return pick_circumvention_point(s.scene, s.rhs.element_positions(), s.optimizer.clearance);
}

OptimizationResult optimize_rhs(const Scenario& s) {
  return optimize_trajectory(s.scene.receiver, anchor_point(s), s.rhs, s.optimizer,
                             [&](const ApertureExcitation& exc) { return s.power_of(exc); });
}

UlaBest best_ula(const Scenario& s, Point obstacle, std::size_t workers) {
  const double l_pa = s.ula.aperture_length();
  std::vector<double> offsets;
  for (double c : linear_range(-s.config.ula_offset_span, 0.0, s.config.ula_offset_step)) offsets.push_back(c);
  for (double c : linear_range(l_pa, l_pa + s.config.ula_offset_span, s.config.ula_offset_step)) offsets.push_back(c);

  std::vector<double> powers(offsets.size(), kNan);
  parallel_for(offsets.size(), workers, [&](std::size_t i) {
    try {
      const Trajectory traj = solve_ab_from_c(s.scene.receiver, obstacle, offsets[i]);
      if (!traj.covers(0.0) || !traj.covers(l_pa)) return;
      powers[i] = s.power_of(airy_ula(s.ula, traj));
    } catch (const std::domain_error&) {
    }
  });

  UlaBest best;
  best.power = -1.0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (std::isnan(powers[i]) || powers[i] <= best.power) continue;
    best.power = powers[i];
    best.c = offsets[i];
  }
  if (best.power < 0.0) throw std::domain_error("no undistorted ULA offset in the scanned range");
  best.trajectory = solve_ab_from_c(s.scene.receiver, obstacle, best.c);
  return best;
}

Point focus_point(const Scenario& s) { return s.config.focused_target.value_or(s.scene.receiver); }

// Same scenario with another RHS pitch; the noise power and receive aperture
// stay fixed, and the grid is shared whenever the new pitch lands on it.
Scenario with_rhs_spacing(const Scenario& base, double spacing_wavelengths) {
  ScenarioConfig cfg = base.config;
  cfg.rhs_spacing_wavelengths = spacing_wavelengths;
  cfg.noise_power = base.receiver.noise_power;
  cfg.effective_aperture = base.receiver.effective_aperture;
  Scenario s = resolve(cfg);
  const double ratio = s.rhs.element_spacing / base.grid.dx;
  if (std::abs(ratio - std::round(ratio)) < 1e-6 && std::round(ratio) >= 1.0) s.grid = base.grid;
  return s;
}

std::vector<std::string> with_header(const Scenario& s, std::vector<std::string> extra) {
  auto lines = s.config.header_lines();
  lines.insert(lines.end(), extra.begin(), extra.end());
  return lines;
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_beam(const std::string& dir, const std::string& stem, const Scenario& s, const PropagationResult& field,
                const std::vector<std::string>& header, std::vector<std::string>& files) {
  const auto lines = with_header(s, header);
  write_slice_csv(join(dir, stem + "_slice.csv"), field.final_slice, lines);
  files.push_back(join(dir, stem + "_slice.csv"));
  HeatmapOptions opts;
  opts.scale = HeatmapScale::Decibel;
  write_heatmap_pgm(join(dir, stem + "_heatmap.pgm"), field.retained, opts, lines);
  files.push_back(join(dir, stem + "_heatmap.pgm"));
}

std::size_t heatmap_stride(const Scenario& s) {
  return std::max<std::size_t>(1, s.scene.plane_count() / 400);
}

} // namespace

BeamKind parse_beam_kind(const std::string& name) {
  if (name == "airy_rhs") return BeamKind::AiryRhs;
  if (name == "airy_ula") return BeamKind::AiryUla;
  if (name == "focused") return BeamKind::Focused;
  if (name == "focused_ula") return BeamKind::FocusedUla;
  throw std::invalid_argument("unknown beam kind '" + name + "'");
}

std::string to_string(BeamKind kind) {
  switch (kind) {
  case BeamKind::AiryRhs: return "airy_rhs";
  case BeamKind::AiryUla: return "airy_ula";
  case BeamKind::Focused: return "focused";
  case BeamKind::FocusedUla: return "focused_ula";
  }
  return "unknown";
}

SingleRunReport run_single(const Scenario& scenario, BeamKind kind, std::optional<Trajectory> trajectory,
                           std::size_t retain_every) {
  SingleRunReport report;
  report.kind = kind;
  ApertureExcitation exc;
  switch (kind) {
  case BeamKind::AiryRhs:
    if (trajectory) {
      exc = airy_rhs(scenario.rhs, *trajectory, scenario.optimizer.min_active);
      report.trajectory = trajectory;
    } else {
      report.optimization = optimize_rhs(scenario);
      report.trajectory = report.optimization->trajectory;
      exc = report.optimization->excitation;
    }
    break;
  case BeamKind::AiryUla:
    if (!trajectory) trajectory = best_ula(scenario, anchor_point(scenario), scenario.config.workers).trajectory;
    report.trajectory = trajectory;
    exc = airy_ula(scenario.ula, *trajectory);
    break;
  case BeamKind::Focused: exc = focused_rhs(scenario.rhs, focus_point(scenario)); break;
  case BeamKind::FocusedUla: exc = focused_ula(scenario.ula, focus_point(scenario)); break;
  }
  report.field = scenario.field_of(exc, retain_every);
  report.power = received_power(report.field.final_slice, scenario.receiver, scenario.scene.receiver.x);
  report.rate = achievable_rate(report.power, scenario.receiver);
  return report;
}

UlaBest best_ula_offset(const Scenario& scenario, Point obstacle) {
  return best_ula(scenario, obstacle, scenario.config.workers);
}

void write_table_csv(const std::string& path, const Table& table, const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (const auto& line : header) out << "# " << line << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

SweepKind parse_sweep_kind(const std::string& name) {
  if (name == "offset_c") return SweepKind::OffsetC;
  if (name == "user_z") return SweepKind::UserZ;
  if (name == "spacing") return SweepKind::Spacing;
  throw std::invalid_argument("unknown sweep kind '" + name + "'");
}

std::vector<double> linear_range(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start)
    throw std::invalid_argument("empty sweep range");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w)
    threads.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

Table run_sweep(const Scenario& scenario, const SweepSpec& spec, std::size_t workers) {
  if (spec.values.empty()) throw std::invalid_argument("sweep has no points");
  Table table;
  table.rows.resize(spec.values.size());

  switch (spec.kind) {
  case SweepKind::OffsetC: {
    table.columns = {"c", "a", "b", "z_max", "active_elements", "rhs_feasible", "within_offset_bound",
                     "ula_undistorted", "power_rhs", "power_ula"};
    const Point anchor = anchor_point(scenario);
    parallel_for(spec.values.size(), workers, [&](std::size_t i) {
      const double c = spec.values[i];
      auto& row = table.rows[i];
      row.assign(table.columns.size(), kNan);
      row[0] = c;
      std::optional<Trajectory> traj;
      try {
        traj = solve_ab_from_c(scenario.scene.receiver, anchor, c);
      } catch (const std::domain_error&) {
        return;
      }
      row[1] = traj->a();
      row[2] = traj->b();
      const double l = scenario.rhs.aperture_length();
      try {
        row[3] = z_max(*traj, l);
      } catch (const std::domain_error&) {
      }
      const auto fo = feasible_offset(traj->a() > 0.0, c, l, scenario.rhs.element_spacing,
                                      scenario.optimizer.min_active);
      row[4] = static_cast<double>(fo.active_elements);
      row[5] = fo.feasible ? 1.0 : 0.0;
      row[6] = fo.within_offset_bound ? 1.0 : 0.0;
      row[7] = traj->covers(0.0) && traj->covers(scenario.ula.aperture_length()) ? 1.0 : 0.0;
      if (fo.feasible) row[8] = scenario.power_of(airy_rhs(scenario.rhs, *traj, scenario.optimizer.min_active));
      row[9] = scenario.power_of(airy_ula(scenario.ula, *traj));
    });
    break;
  }
  case SweepKind::UserZ: {
    table.columns = {"z_r",      "c_est",     "c_opt",     "a",          "b",        "z_max",
                     "x_max",    "d_r",       "theta_r",   "score",      "power_rhs", "rate_rhs",
                     "power_ula", "rate_ula", "power_focused", "rate_focused"};
    parallel_for(spec.values.size(), workers, [&](std::size_t i) {
      const Scenario s = scenario.with_user({scenario.scene.receiver.x, spec.values[i]});
      auto& row = table.rows[i];
      row.assign(table.columns.size(), kNan);
      row[0] = spec.values[i];
      const Point anchor = anchor_point(s);
      const OptimizationResult opt = optimize_rhs(s);
      row[1] = opt.c_est;
      row[2] = opt.c_opt;
      row[3] = opt.trajectory->a();
      row[4] = opt.trajectory->b();
      try {
        const GeometricEstimate est = estimate_score(s.scene.receiver, anchor, opt.c_opt, s.rhs, s.optimizer);
        row[5] = est.z_max;
        row[6] = est.x_max;
        row[7] = est.distance;
        row[8] = est.angle;
        row[9] = est.score;
      } catch (const std::domain_error&) {
      }
      row[10] = opt.power_opt;
      row[11] = achievable_rate(opt.power_opt, s.receiver);
      const UlaBest ula = best_ula(s, anchor, 1);
      row[12] = ula.power;
      row[13] = achievable_rate(ula.power, s.receiver);
      const double focused = s.power_of(focused_rhs(s.rhs, s.scene.receiver));
      row[14] = focused;
      row[15] = achievable_rate(focused, s.receiver);
    });
    break;
  }
  case SweepKind::Spacing: {
    table.columns = {"spacing_wavelengths", "elements", "dx", "c_opt", "power_rhs", "rate_rhs"};
    parallel_for(spec.values.size(), workers, [&](std::size_t i) {
      const Scenario s = with_rhs_spacing(scenario, spec.values[i]);
      const OptimizationResult opt = optimize_rhs(s);
      table.rows[i] = {spec.values[i], static_cast<double>(s.rhs.element_count), s.grid.dx, opt.c_opt,
                       opt.power_opt, achievable_rate(opt.power_opt, s.receiver)};
    });
    break;
  }
  }
  return table;
}

ReproOutput run_repro(const std::string& figure, const Scenario& scenario, const std::string& out_dir,
                      std::size_t workers) {
  std::filesystem::create_directories(out_dir);
  ReproOutput out;
  const double l = scenario.rhs.aperture_length();

  if (figure == "fig3") {
    // Offset inside the aperture: RHS switches [c, l] off, the ULA cannot.
    const double c = 0.5 * l;
    const Trajectory traj = solve_ab_from_c(scenario.scene.receiver, anchor_point(scenario), c);
    const auto stride = heatmap_stride(scenario);
    const auto rhs = run_single(scenario, BeamKind::AiryRhs, traj, stride);
    const auto ula = run_single(scenario, BeamKind::AiryUla, traj, stride);
    const std::vector<std::string> info{"c=" + fmt(c), "a=" + fmt(traj.a()), "b=" + fmt(traj.b())};
    write_beam(out_dir, "fig3_rhs", scenario, rhs.field, info, out.files);
    write_beam(out_dir, "fig3_ula", scenario, ula.field, info, out.files);
    out.summary = {"c=" + fmt(c), "a=" + fmt(traj.a()), "b=" + fmt(traj.b()),
                   "power_rhs_db=" + fmt(to_db(rhs.power)), "power_ula_db=" + fmt(to_db(ula.power))};
  } else if (figure == "fig4") {
    SweepSpec spec{SweepKind::OffsetC, linear_range(-l, 2.0 * l, l / 100.0)};
    const Table table = run_sweep(scenario, spec, workers);
    write_table_csv(join(out_dir, "fig4a_offset_sweep.csv"), table, scenario.config.header_lines());
    out.files.push_back(join(out_dir, "fig4a_offset_sweep.csv"));

    double best_rhs = -1.0, best_rhs_c = kNan;
    for (const auto& row : table.rows)
      if (row[5] == 1.0 && row[8] > best_rhs) {
        best_rhs = row[8];
        best_rhs_c = row[0];
      }
    const UlaBest ula = best_ula_offset(scenario, anchor_point(scenario));
    const auto opt = run_single(scenario, BeamKind::AiryRhs, std::nullopt, heatmap_stride(scenario));
    write_beam(out_dir, "fig4b_optimal_rhs", scenario, opt.field,
               {"c_opt=" + fmt(opt.optimization->c_opt)}, out.files);
    out.summary = {"best_rhs_c=" + fmt(best_rhs_c),
                   "best_rhs_power_db=" + fmt(to_db(best_rhs)),
                   "best_ula_c=" + fmt(ula.c),
                   "best_ula_power_db=" + fmt(to_db(ula.power)),
                   "margin_db=" + fmt(to_db(best_rhs) - to_db(ula.power)),
                   "optimized_c=" + fmt(opt.optimization->c_opt),
                   "optimized_power_db=" + fmt(to_db(opt.power))};
  } else if (figure == "fig6") {
    const Scenario s = scenario.with_user({scenario.scene.receiver.x, 2.3});
    const auto stride = heatmap_stride(s);
    const auto curved = run_single(s, BeamKind::AiryRhs, std::nullopt, stride);
    const auto focused = run_single(s, BeamKind::Focused, std::nullopt, stride);
    write_beam(out_dir, "fig6_curved", s, curved.field, {"c_opt=" + fmt(curved.optimization->c_opt)}, out.files);
    write_beam(out_dir, "fig6_focused", s, focused.field, {}, out.files);
    out.summary = {"z_r=" + fmt(s.scene.receiver.z),
                   "c_opt=" + fmt(curved.optimization->c_opt),
                   "power_curved_db=" + fmt(to_db(curved.power)),
                   "power_focused_db=" + fmt(to_db(focused.power)),
                   "margin_db=" + fmt(to_db(curved.power) - to_db(focused.power)),
                   "rate_curved=" + fmt(curved.rate),
                   "rate_focused=" + fmt(focused.rate)};
  } else if (figure == "fig7" || figure == "fig8") {
    const auto z = linear_range(1.6, 2.3 + 1e-9, 0.1);
    const Table base = run_sweep(scenario, {SweepKind::UserZ, z}, workers);
    if (figure == "fig8") {
      write_table_csv(join(out_dir, "fig8_parameters.csv"), base, scenario.config.header_lines());
      out.files.push_back(join(out_dir, "fig8_parameters.csv"));
      for (const auto& row : base.rows)
        out.summary.push_back("z_r=" + fmt(row[0]) + " c_opt=" + fmt(row[2]) + " a=" + fmt(row[3]) +
                              " d_r=" + fmt(row[7]) + " theta_r=" + fmt(row[8]));
    } else {
      const Scenario coarse = with_rhs_spacing(scenario, 0.2);
      std::vector<double> coarse_rate(z.size());
      parallel_for(z.size(), workers, [&](std::size_t i) {
        const Scenario s = coarse.with_user({coarse.scene.receiver.x, z[i]});
        coarse_rate[i] = achievable_rate(optimize_rhs(s).power_opt, s.receiver);
      });
      Table table;
      table.columns = {"z_r", "rate_rhs_lambda_10", "rate_rhs_lambda_5", "rate_ula_lambda_2", "rate_focused"};
      for (std::size_t i = 0; i < z.size(); ++i)
        table.rows.push_back({z[i], base.rows[i][11], coarse_rate[i], base.rows[i][13], base.rows[i][15]});
      write_table_csv(join(out_dir, "fig7_rates.csv"), table,
                      with_header(scenario, {"noise_power=" + fmt(scenario.receiver.noise_power)}));
      out.files.push_back(join(out_dir, "fig7_rates.csv"));
      for (const auto& row : table.rows)
        out.summary.push_back("z_r=" + fmt(row[0]) + " rate_rhs_lambda_10=" + fmt(row[1]) +
                              " rate_rhs_lambda_5=" + fmt(row[2]) + " rate_ula_lambda_2=" + fmt(row[3]));
    }
  } else {
    throw std::invalid_argument("unknown figure '" + figure + "' (expected fig3, fig4, fig6, fig7 or fig8)");
  }

  std::ofstream summary(join(out_dir, figure + "_summary.txt"));
  for (const auto& line : scenario.config.header_lines()) summary << "# " << line << '\n';
  for (const auto& line : out.summary) summary << line << '\n';
  out.files.push_back(join(out_dir, figure + "_summary.txt"));
  return out;
}

} // namespace holoairy
