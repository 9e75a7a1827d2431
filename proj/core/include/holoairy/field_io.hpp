// SPDX-License-Identifier: Apache-2.0
//
// Plain-text and image dumps of propagated fields.
//
// Slice CSV: optional '#' header comment lines, then the column line
// "x,re,im,intensity" and one row per grid sample.
//
// Heatmap PGM: binary 8-bit greymap (P5). Row r is retained plane r (z grows
// downward), column i is grid sample i. Pixel = round(255 * v) with
// v = |E|^2 / max|E|^2 (linear) or v = 1 + 10 log10(|E|^2 / max) / range_db
// clamped to [0, 1] (log scale). Header comments follow the magic number.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "holoairy/propagation.hpp"

namespace holoairy {

enum class HeatmapScale { Linear, Decibel };

struct HeatmapOptions {
  HeatmapScale scale = HeatmapScale::Linear;
  double range_db = 40.0;
  // Optional crop in x; columns outside [x_lo, x_hi] are dropped when x_lo < x_hi.
  double x_lo = 0.0;
  double x_hi = 0.0;
};

void write_slice_csv(std::ostream& out, const FieldSlice& slice, const std::vector<std::string>& header = {});
void write_heatmap_pgm(std::ostream& out, const std::vector<FieldSlice>& slices, const HeatmapOptions& options = {},
                       const std::vector<std::string>& header = {});

// File variants; throw std::runtime_error if the file cannot be written.
void write_slice_csv(const std::string& path, const FieldSlice& slice, const std::vector<std::string>& header = {});
void write_heatmap_pgm(const std::string& path, const std::vector<FieldSlice>& slices,
                       const HeatmapOptions& options = {}, const std::vector<std::string>& header = {});

} // namespace holoairy
