// SPDX-License-Identifier: Apache-2.0
//
// holoairy run | sweep | repro <figure>
//
// Exit status 0 on success. On failure a single line
//   error: <category>: <message>
// goes to stderr and the status is 1 (usage) or 2 (runtime).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "holoairy/experiments.hpp"
#include "holoairy/field_io.hpp"

namespace {

using namespace holoairy;

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::optional<std::size_t> workers;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_path, "Scenario JSON file (defaults apply when omitted)");
  cmd->add_option("--out", common.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--workers", common.workers, "Concurrent sweep workers (overrides runtime.workers)");
  cmd->add_option("--set", common.overrides, "Override a config key: section.key=value")->take_all();
}

Scenario load(const Common& common) {
  ScenarioConfig cfg = common.config_path.empty() ? ScenarioConfig{} : ScenarioConfig::from_file(common.config_path);
  cfg.apply_overrides(common.overrides);
  if (common.workers) {
    cfg.workers = *common.workers;
    cfg.validate();
  }
  return resolve(cfg);
}

std::string path_in(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void print_lines(const std::vector<std::string>& lines) {
  for (const auto& line : lines) std::cout << line << '\n';
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

int run_command(const Common& common, const std::string& beam, const std::vector<double>& abc) {
  const Scenario s = load(common);
  std::optional<Trajectory> traj;
  if (!abc.empty()) traj = Trajectory(abc.at(0), abc.at(1), abc.at(2));
  const BeamKind kind = parse_beam_kind(beam);
  const auto report = run_single(s, kind, traj, std::max<std::size_t>(1, s.scene.plane_count() / 400));

  std::filesystem::create_directories(common.out_dir);
  const std::string stem = "run_" + to_string(kind);
  std::vector<std::string> summary{"beam=" + to_string(kind), "power_w=" + num(report.power),
                                   "power_db=" + num(10.0 * std::log10(report.power)), "rate=" + num(report.rate),
                                   "noise_power_w=" + num(s.receiver.noise_power)};
  if (report.trajectory)
    summary.insert(summary.end(), {"a=" + num(report.trajectory->a()), "b=" + num(report.trajectory->b()),
                                   "c=" + num(report.trajectory->c())});
  if (report.optimization) {
    summary.push_back("c_est=" + num(report.optimization->c_est));
    Table trace;
    trace.columns = {"c", "a", "b", "z_max", "d_r", "theta_r", "score", "power"};
    for (const auto& r : report.optimization->trace)
      trace.rows.push_back({r.c, r.a, r.b, r.z_max, r.distance, r.angle, r.score, r.power});
    write_table_csv(path_in(common.out_dir, stem + "_trace.csv"), trace, s.config.header_lines());
  }

  auto header = s.config.header_lines();
  header.insert(header.end(), summary.begin(), summary.end());
  write_slice_csv(path_in(common.out_dir, stem + "_slice.csv"), report.field.final_slice, header);
  HeatmapOptions opts;
  opts.scale = HeatmapScale::Decibel;
  write_heatmap_pgm(path_in(common.out_dir, stem + "_heatmap.pgm"), report.field.retained, opts, header);
  std::ofstream(path_in(common.out_dir, stem + "_summary.txt")) << [&] {
    std::string text;
    for (const auto& line : s.config.header_lines()) text += "# " + line + "\n";
    for (const auto& line : summary) text += line + "\n";
    return text;
  }();
  print_lines(summary);
  return 0;
}

int sweep_command(const Common& common, const std::string& kind_name, std::optional<double> start,
                  std::optional<double> stop, std::optional<double> step, const std::vector<double>& values) {
  const Scenario s = load(common);
  SweepSpec spec;
  spec.kind = parse_sweep_kind(kind_name);
  if (!values.empty()) {
    spec.values = values;
  } else {
    if (!start || !stop || !step) throw std::invalid_argument("sweep needs --values or --start/--stop/--step");
    spec.values = linear_range(*start, *stop, *step);
  }
  const Table table = run_sweep(s, spec, s.config.workers);
  std::filesystem::create_directories(common.out_dir);
  const std::string path = path_in(common.out_dir, "sweep_" + kind_name + ".csv");
  write_table_csv(path, table, s.config.header_lines());
  std::cout << "rows=" << table.rows.size() << "\nfile=" << path << '\n';
  return 0;
}

int repro_command(const Common& common, const std::string& figure) {
  const Scenario s = load(common);
  const ReproOutput out = run_repro(figure, s, common.out_dir, s.config.workers);
  print_lines(out.summary);
  for (const auto& f : out.files) std::cout << "file=" << f << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curved-beam simulation and trajectory optimisation for holographic surfaces"};
  app.require_subcommand(1);

  Common common;
  std::string beam = "airy_rhs";
  std::vector<double> abc;
  auto* run = app.add_subcommand("run", "Single simulation: excitation, propagation, receiver summary");
  add_common(run, common);
  run->add_option("--beam", beam, "airy_rhs | airy_ula | focused | focused_ula")->capture_default_str();
  run->add_option("--trajectory", abc, "Explicit a,b,c (default: optimised)")->expected(3)->delimiter(',');

  std::string sweep_kind;
  std::optional<double> start, stop, step;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep written as one CSV table");
  add_common(sweep, common);
  sweep->add_option("--kind", sweep_kind, "offset_c | user_z | spacing")->required();
  sweep->add_option("--start", start);
  sweep->add_option("--stop", stop);
  sweep->add_option("--step", step);
  sweep->add_option("--values", values, "Explicit comma-separated points")->delimiter(',');

  std::string figure;
  auto* repro = app.add_subcommand("repro", "Reproduce one figure's data");
  add_common(repro, common);
  repro->add_option("figure", figure, "fig3 | fig4 | fig6 | fig7 | fig8")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*run) return run_command(common, beam, abc);
    if (*sweep) return sweep_command(common, sweep_kind, start, stop, step, values);
    if (*repro) return repro_command(common, figure);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: infeasible: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: runtime: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
