// SPDX-License-Identifier: Apache-2.0

#include "holoairy/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace holoairy {

namespace {

void write_comments(std::ostream& out, const std::vector<std::string>& header) {
  for (const auto& line : header) out << "# " << line << '\n';
}

std::ofstream open_for_write(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

} // namespace

void write_slice_csv(std::ostream& out, const FieldSlice& slice, const std::vector<std::string>& header) {
  write_comments(out, header);
  out << "# z=" << std::setprecision(17) << slice.z << '\n';
  out << "x,re,im,intensity\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < slice.values.size(); ++i) {
    const cplx v = slice.values[i];
    out << slice.grid.x(i) << ',' << v.real() << ',' << v.imag() << ',' << std::norm(v) << '\n';
  }
}

void write_heatmap_pgm(std::ostream& out, const std::vector<FieldSlice>& slices, const HeatmapOptions& options,
                       const std::vector<std::string>& header) {
  if (slices.empty()) throw std::invalid_argument("heatmap needs at least one slice");
  const GridSpec& grid = slices.front().grid;
  std::size_t first = 0;
  std::size_t last = grid.count;
  if (options.x_lo < options.x_hi) {
    first = grid.count;
    last = 0;
    for (std::size_t i = 0; i < grid.count; ++i) {
      const double x = grid.x(i);
      if (x >= options.x_lo && x <= options.x_hi) {
        first = std::min(first, i);
        last = std::max(last, i + 1);
      }
    }
    if (first >= last) throw std::invalid_argument("heatmap crop excludes every sample");
  }

  double peak = 0.0;
  for (const auto& s : slices) {
    if (s.values.size() != grid.count) throw std::invalid_argument("slices use different grids");
    for (std::size_t i = first; i < last; ++i) peak = std::max(peak, std::norm(s.values[i]));
  }

  out << "P5\n";
  write_comments(out, header);
  out << (last - first) << ' ' << slices.size() << "\n255\n";
  std::vector<std::uint8_t> row(last - first);
  for (const auto& s : slices) {
    for (std::size_t i = first; i < last; ++i) {
      double v = peak > 0.0 ? std::norm(s.values[i]) / peak : 0.0;
      if (options.scale == HeatmapScale::Decibel)
        v = v > 0.0 ? 1.0 + 10.0 * std::log10(v) / options.range_db : 0.0;
      v = std::clamp(v, 0.0, 1.0);
      row[i - first] = static_cast<std::uint8_t>(std::lround(255.0 * v));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
}

void write_slice_csv(const std::string& path, const FieldSlice& slice, const std::vector<std::string>& header) {
  auto out = open_for_write(path);
  write_slice_csv(out, slice, header);
}

void write_heatmap_pgm(const std::string& path, const std::vector<FieldSlice>& slices, const HeatmapOptions& options,
                       const std::vector<std::string>& header) {
  auto out = open_for_write(path, std::ios::out | std::ios::binary);
  write_heatmap_pgm(out, slices, options, header);
}

} // namespace holoairy
