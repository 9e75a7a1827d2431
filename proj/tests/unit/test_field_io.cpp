// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>
#include <string>

#include "holoairy/field_io.hpp"

using namespace holoairy;

namespace {

FieldSlice ramp(double z) {
  FieldSlice s;
  s.z = z;
  s.grid = {-0.1, 0.05, 5};
  for (int i = 0; i < 5; ++i) s.values.push_back(cplx(0.1 * i, -0.2 * i * z));
  return s;
}

} // namespace

TEST_CASE("slice CSV round-trips every sample", "[field_io]") {
  std::ostringstream out;
  const FieldSlice s = ramp(0.7);
  write_slice_csv(out, s, {"config_hash=0123"});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# config_hash=0123");
  std::getline(in, line);
  CHECK(line == "# z=0.69999999999999996");
  std::getline(in, line);
  CHECK(line == "x,re,im,intensity");
  for (std::size_t i = 0; i < 5; ++i) {
    REQUIRE(std::getline(in, line));
    std::istringstream row(line);
    std::string cell;
    double v[4];
    for (double& x : v) {
      std::getline(row, cell, ',');
      x = std::strtod(cell.c_str(), nullptr);
    }
    CHECK(v[0] == s.grid.x(i));
    CHECK(v[1] == s.values[i].real());
    CHECK(v[2] == s.values[i].imag());
    CHECK(v[3] == std::norm(s.values[i]));
  }
  CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("heatmap is a binary greymap normalised to the peak", "[field_io]") {
  std::ostringstream out;
  write_heatmap_pgm(out, {ramp(0.0), ramp(1.0)}, {}, {"config_hash=0123"});
  const std::string data = out.str();
  const std::string header = "P5\n# config_hash=0123\n5 2\n255\n";
  REQUIRE(data.substr(0, header.size()) == header);
  const std::string pixels = data.substr(header.size());
  REQUIRE(pixels.size() == 10);
  CHECK(static_cast<unsigned char>(pixels[9]) == 255);
  CHECK(static_cast<unsigned char>(pixels[0]) == 0);
  // row 0, column 4: |0.4|^2 / (0.4^2 + 0.8^2) = 0.2
  CHECK(static_cast<unsigned char>(pixels[4]) == 51);

  std::ostringstream db;
  HeatmapOptions opts;
  opts.scale = HeatmapScale::Decibel;
  opts.range_db = 20.0;
  write_heatmap_pgm(db, {ramp(0.0), ramp(1.0)}, opts);
  const std::string px = db.str().substr(std::string("P5\n5 2\n255\n").size());
  // 10 log10(0.2) = -6.99 dB -> 1 - 6.99/20
  CHECK(static_cast<unsigned char>(px[4]) == static_cast<unsigned char>(std::lround(255 * (1 + 10 * std::log10(0.2) / 20))));

  std::ostringstream crop;
  opts.x_lo = -0.06;
  opts.x_hi = 0.01;
  write_heatmap_pgm(crop, {ramp(1.0)}, opts);
  CHECK(crop.str().substr(0, 8) == "P5\n2 1\n2");
  CHECK_THROWS_AS(write_heatmap_pgm(crop, {}, {}), std::invalid_argument);
}
