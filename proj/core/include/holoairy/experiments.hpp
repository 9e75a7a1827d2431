// SPDX-License-Identifier: Apache-2.0
//
// Single runs, parameter sweeps and figure reproductions built on a resolved
// Scenario. Everything here is deterministic: identical configurations give
// bit-identical tables regardless of the worker count.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "holoairy/scenario.hpp"

namespace holoairy {

enum class BeamKind { AiryRhs, AiryUla, Focused, FocusedUla };

BeamKind parse_beam_kind(const std::string& name);
std::string to_string(BeamKind kind);

struct SingleRunReport {
  BeamKind kind = BeamKind::AiryRhs;
  std::optional<Trajectory> trajectory;
  std::optional<OptimizationResult> optimization;
  double power = 0.0;
  double rate = 0.0;
  PropagationResult field;
};

// Builds the excitation, propagates, evaluates the receiver. Without an explicit
// trajectory the curved beams are optimised: RHS by the geometric search, ULA
// by the best undistorted offset.
SingleRunReport run_single(const Scenario& scenario, BeamKind kind, std::optional<Trajectory> trajectory = {},
                           std::size_t retain_every = 0);

struct UlaBest {
  double c = 0.0;
  double power = 0.0;
  std::optional<Trajectory> trajectory;
};

// Best ULA curved beam over offsets that keep the whole ULA aperture valid
// (c beyond the aperture on the side matching sign(a)).
UlaBest best_ula_offset(const Scenario& scenario, Point obstacle);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_table_csv(const std::string& path, const Table& table, const std::vector<std::string>& header);

enum class SweepKind { OffsetC, UserZ, Spacing };
SweepKind parse_sweep_kind(const std::string& name);

struct SweepSpec {
  SweepKind kind = SweepKind::OffsetC;
  std::vector<double> values; // c [m], z_r [m] or spacing [wavelengths]
};

// Inclusive arithmetic range; throws std::invalid_argument when empty.
std::vector<double> linear_range(double start, double stop, double step);

Table run_sweep(const Scenario& scenario, const SweepSpec& spec, std::size_t workers);

// Runs `task(i)` for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task);

struct ReproOutput {
  std::vector<std::string> files;
  std::vector<std::string> summary; // key=value lines
};

// fig3 | fig4 | fig6 | fig7 | fig8
ReproOutput run_repro(const std::string& figure, const Scenario& scenario, const std::string& out_dir,
                      std::size_t workers);

} // namespace holoairy
