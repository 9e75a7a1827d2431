// SPDX-License-Identifier: Apache-2.0
//
// Scalar field propagation in the (x, z) plane: angular-spectrum stepping with
// per-plane blockage masks, a brute-force Rayleigh-Sommerfeld oracle, and
// received power at a point receiver.

#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "holoairy/aperture.hpp"
#include "holoairy/constants.hpp"

namespace holoairy {

// Uniform sampling x_i = x_start + i * dx, i in [0, count).
struct GridSpec {
  double x_start = 0.0;
  double dx = 0.0;
  std::size_t count = 0;

  double x(std::size_t i) const { return x_start + dx * static_cast<double>(i); }
  double x_end() const { return x(count - 1); }
  bool contains(double x) const { return x >= x_start && x <= x_end(); }
  void validate() const;
};

// Power-of-two grid covering [x_min - margin, x_max + margin] whose spacing
// divides `align_spacing` and does not exceed `dx_max`. Grid nodes fall on
// integer multiples of dx, so elements at multiples of `align_spacing` land
// exactly on samples.
GridSpec simulation_grid(double x_min, double x_max, double dx_max, double align_spacing, double margin);

struct FieldSlice {
  double z = 0.0;
  GridSpec grid;
  std::vector<cplx> values;

  double energy() const; // sum |E_i|^2
};

// Rectangle [x, x + width_x] x [z, z + length_z] with field attenuation alpha.
struct Obstacle {
  double x = 0.0;
  double z = 0.0;
  double length_z = 0.0;
  double width_x = 0.0;
  double attenuation = 0.0;

  bool contains(double px, double pz) const;
  void validate() const;
};

struct Scene {
  std::vector<Obstacle> obstacles;
  Point receiver;
  double plane_spacing = 5e-3; // delta_z [m]

  // S = round(z_r / delta_z), at least one plane.
  std::size_t plane_count() const;
  // Plane spacing actually used so that plane S lands on z_r.
  double effective_plane_spacing() const;
  // B_z(x) sampled on `grid`; empty when no obstacle occupies plane z.
  std::vector<double> blockage_mask(const GridSpec& grid, double z) const;
  void validate() const;
};

struct ReceiverModel {
  double effective_aperture = 0.0;               // A_e [m^2]
  double impedance = kFreeSpaceImpedance;         // Z_0 [ohm]
  double noise_power = 1.0;                       // sigma^2 [W]

  // Isotropic receive aperture lambda^2 / (4 pi).
  static ReceiverModel isotropic(double frequency_hz, double noise_power = 1.0);
  void validate() const;
};

// Deposits each element weight on its nearest grid sample. Throws
// std::invalid_argument when dx exceeds the element pitch, an element lies
// outside the grid, or two elements map to the same sample.
FieldSlice excitation_to_slice(const ApertureExcitation& exc, const GridSpec& grid);

// Band-limited free-space step exp(-j dz sqrt(k^2 - kx^2)); evanescent
// components (|kx| > k) are zeroed. Holds an FFT plan for one grid size, so
// reuse one instance per thread for repeated steps.
class AsmPropagator {
public:
  AsmPropagator(const GridSpec& grid, double wavenumber, double plane_spacing);
  ~AsmPropagator();
  AsmPropagator(AsmPropagator&&) noexcept;
  AsmPropagator& operator=(AsmPropagator&&) noexcept;

  const GridSpec& grid() const { return grid_; }
  double plane_spacing() const { return plane_spacing_; }

  // In-place step: values <- mask * IFFT(FFT(values) * H). An empty mask means
  // free space.
  void step(std::vector<cplx>& values, const std::vector<double>& mask = {}) const;
  // Energy of the spectral components with |kx| <= k (Parseval-normalised to
  // the spatial sum of |E|^2).
  double propagating_energy(const std::vector<cplx>& values) const;

private:
  struct Impl;
  GridSpec grid_;
  double plane_spacing_;
  std::unique_ptr<Impl> impl_;
};

// Single step on a slice; builds a throwaway propagator.
FieldSlice asm_step(const FieldSlice& slice, double plane_spacing, double wavenumber,
                    const std::vector<double>& mask = {});

enum class RsKernel {
  // First-kind Rayleigh-Sommerfeld kernel for a 2-D (x, z) problem:
  // -(j k dz / 2r) H1^(2)(k r). Consistent with the angular-spectrum step.
  Cylindrical,
  // (dz e^{-jkr} / (2 pi r^2)) (jk + 1/r): the 3-D point-source kernel
  // integrated along x only.
  Spherical,
};

// O(count^2) quadrature sum_j E_j K(x_i - x_j) dx. Oracle use only.
FieldSlice rs_direct(const FieldSlice& slice, double plane_spacing, double wavenumber,
                     RsKernel kernel = RsKernel::Cylindrical);

struct PropagationOptions {
  double absorber_fraction = 0.1; // cosine taper over this fraction of each window edge; 0 disables
  std::size_t retain_every = 0;   // keep every n-th plane for heatmaps; 0 keeps the final plane only
};

struct PropagationResult {
  FieldSlice final_slice;
  std::vector<FieldSlice> retained;
};

// Cosine taper: 0 at the window edges rising to 1 over `fraction` of the width on
// each side.
std::vector<double> absorber_profile(std::size_t count, double fraction);

// Iterates S masked ASM steps from z = 0 to z = z_r.
PropagationResult propagate(const ApertureExcitation& exc, const Scene& scene, const GridSpec& grid,
                            double wavenumber, const PropagationOptions& options = {});
// Same, reusing a propagator built for (grid, k, scene.effective_plane_spacing()).
PropagationResult propagate(const ApertureExcitation& exc, const Scene& scene, const AsmPropagator& propagator,
                            const PropagationOptions& options = {});

// Linear interpolation of the complex field at x.
cplx field_at(const FieldSlice& slice, double x);

// P_r = A_e |E(x_r)|^2 / Z_0.
double received_power(const FieldSlice& final_slice, const ReceiverModel& rx, double x_r);

// log2(1 + P_r / sigma^2) [bit/s/Hz].
double achievable_rate(double received_power, const ReceiverModel& rx);

} // namespace holoairy
