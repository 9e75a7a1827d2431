// SPDX-License-Identifier: Apache-2.0

#include "holoairy/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace holoairy {

void GridSpec::validate() const {
  if (!(dx > 0.0) || !std::isfinite(x_start)) throw std::invalid_argument("grid needs dx > 0 and a finite start");
  if (count < 2) throw std::invalid_argument("grid needs at least two samples");
}

GridSpec simulation_grid(double x_min, double x_max, double dx_max, double align_spacing, double margin) {
  if (!(dx_max > 0.0) || !(align_spacing > 0.0) || !(x_max >= x_min) || !(margin >= 0.0))
    throw std::invalid_argument("invalid grid request");
  const double ratio = std::ceil(align_spacing / dx_max - 1e-9);
  const double dx = align_spacing / std::max(ratio, 1.0);
  auto lo = static_cast<long long>(std::floor((x_min - margin) / dx));
  const auto hi = static_cast<long long>(std::ceil((x_max + margin) / dx));
  const auto needed = static_cast<std::size_t>(hi - lo + 1);
  std::size_t count = 1;
  while (count < needed) count <<= 1;
  lo -= static_cast<long long>((count - needed) / 2);
  return GridSpec{static_cast<double>(lo) * dx, dx, count};
}

double FieldSlice::energy() const {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return sum;
}

bool Obstacle::contains(double px, double pz) const {
  return px >= x && px <= x + width_x && pz >= z && pz <= z + length_z;
}

void Obstacle::validate() const {
  if (!(length_z > 0.0) || !(width_x > 0.0)) throw std::invalid_argument("obstacle extents must be positive");
  if (!(attenuation >= 0.0 && attenuation < 1.0)) throw std::invalid_argument("obstacle attenuation must lie in [0, 1)");
  if (!std::isfinite(x) || !std::isfinite(z)) throw std::invalid_argument("obstacle vertex must be finite");
}

std::size_t Scene::plane_count() const {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(receiver.z / plane_spacing)));
}

double Scene::effective_plane_spacing() const { return receiver.z / static_cast<double>(plane_count()); }

std::vector<double> Scene::blockage_mask(const GridSpec& grid, double z) const {
  std::vector<double> mask;
  const double eps = 1e-9 * plane_spacing;
  for (const auto& ob : obstacles) {
    if (z < ob.z - eps || z > ob.z + ob.length_z + eps) continue;
    if (mask.empty()) mask.assign(grid.count, 1.0);
    for (std::size_t i = 0; i < grid.count; ++i) {
      const double x = grid.x(i);
      if (x >= ob.x && x <= ob.x + ob.width_x) mask[i] = std::min(mask[i], ob.attenuation);
    }
  }
  return mask;
}

void Scene::validate() const {
  if (!(receiver.z > 0.0) || !std::isfinite(receiver.x)) throw std::invalid_argument("receiver needs z_r > 0");
  if (!(plane_spacing > 0.0)) throw std::invalid_argument("plane spacing must be positive");
  for (const auto& ob : obstacles) ob.validate();
}

ReceiverModel ReceiverModel::isotropic(double frequency_hz, double noise_power) {
  const double lambda = wavelength_for(frequency_hz);
  ReceiverModel rx;
  rx.effective_aperture = lambda * lambda / (4.0 * kPi);
  rx.noise_power = noise_power;
  return rx;
}

void ReceiverModel::validate() const {
  if (!(effective_aperture > 0.0) || !(impedance > 0.0) || !(noise_power > 0.0))
    throw std::invalid_argument("receiver aperture, impedance and noise power must be positive");
}

FieldSlice excitation_to_slice(const ApertureExcitation& exc, const GridSpec& grid) {
  grid.validate();
  if (exc.positions.size() != exc.weights.size()) throw std::invalid_argument("positions and weights differ in length");
  FieldSlice slice{0.0, grid, std::vector<cplx>(grid.count, cplx{})};
  std::vector<std::uint8_t> used(grid.count, 0);
  const double tol = 1e-9 * grid.dx;
  for (std::size_t n = 0; n < exc.size(); ++n) {
    const double x = exc.positions[n];
    if (n > 0 && std::abs(x - exc.positions[n - 1]) < grid.dx - tol)
      throw std::invalid_argument("grid spacing exceeds the element pitch");
    const double offset = (x - grid.x_start) / grid.dx;
    const long long i = std::llround(offset);
    if (i < 0 || i >= static_cast<long long>(grid.count))
      throw std::invalid_argument("element at x = " + std::to_string(x) + " lies outside the grid");
    const auto idx = static_cast<std::size_t>(i);
    if (used[idx]) throw std::invalid_argument("two elements map to the same grid sample");
    used[idx] = 1;
    slice.values[idx] = exc.weights[n];
  }
  return slice;
}

struct AsmPropagator::Impl {
  detail::Fft1d fft;
  std::vector<cplx> transfer;
  std::vector<std::uint8_t> propagating;

  explicit Impl(std::size_t n) : fft(n), transfer(n), propagating(n) {}
};

AsmPropagator::AsmPropagator(const GridSpec& grid, double wavenumber, double plane_spacing)
    : grid_(grid), plane_spacing_(plane_spacing) {
  grid.validate();
  if (!(wavenumber > 0.0)) throw std::invalid_argument("wavenumber must be positive");
  if (!(plane_spacing >= 0.0)) throw std::invalid_argument("plane spacing must be non-negative");
  impl_ = std::make_unique<Impl>(grid.count);
  const auto n = static_cast<long long>(grid.count);
  const double dk = 2.0 * kPi / (static_cast<double>(n) * grid.dx);
  const double k2 = wavenumber * wavenumber;
  for (long long i = 0; i < n; ++i) {
    const long long idx = i < (n + 1) / 2 ? i : i - n;
    const double kx = dk * static_cast<double>(idx);
    const double kz2 = k2 - kx * kx;
    const auto u = static_cast<std::size_t>(i);
    if (kz2 >= 0.0) {
      impl_->transfer[u] = std::polar(1.0, -plane_spacing * std::sqrt(kz2));
      impl_->propagating[u] = 1;
    }
  }
}

AsmPropagator::~AsmPropagator() = default;
AsmPropagator::AsmPropagator(AsmPropagator&&) noexcept = default;
AsmPropagator& AsmPropagator::operator=(AsmPropagator&&) noexcept = default;

void AsmPropagator::step(std::vector<cplx>& values, const std::vector<double>& mask) const {
  if (values.size() != grid_.count) throw std::invalid_argument("field does not match the propagator grid");
  if (!mask.empty() && mask.size() != grid_.count) throw std::invalid_argument("mask does not match the grid");
  impl_->fft.forward(values);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= impl_->transfer[i];
  impl_->fft.inverse(values);
  if (!mask.empty())
    for (std::size_t i = 0; i < values.size(); ++i) values[i] *= mask[i];
}

double AsmPropagator::propagating_energy(const std::vector<cplx>& values) const {
  if (values.size() != grid_.count) throw std::invalid_argument("field does not match the propagator grid");
  std::vector<cplx> spectrum = values;
  impl_->fft.forward(spectrum);
  double sum = 0.0;
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    if (impl_->propagating[i]) sum += std::norm(spectrum[i]);
  return sum / static_cast<double>(spectrum.size());
}

FieldSlice asm_step(const FieldSlice& slice, double plane_spacing, double wavenumber, const std::vector<double>& mask) {
  AsmPropagator prop(slice.grid, wavenumber, plane_spacing);
  FieldSlice out = slice;
  prop.step(out.values, mask);
  out.z = slice.z + plane_spacing;
  return out;
}

namespace {

cplx rs_kernel(double offset, double dz, double k, RsKernel kind) {
  const double r = std::hypot(offset, dz);
  if (kind == RsKernel::Cylindrical) {
    const double kr = k * r;
    const cplx hankel2(std::cyl_bessel_j(1.0, kr), -std::cyl_neumann(1.0, kr));
    return cplx(0.0, -k * dz / (2.0 * r)) * hankel2;
  }
  return dz * std::polar(1.0, -k * r) / (2.0 * kPi * r * r) * cplx(1.0 / r, k);
}

} // namespace

FieldSlice rs_direct(const FieldSlice& slice, double plane_spacing, double wavenumber, RsKernel kernel) {
  slice.grid.validate();
  if (!(plane_spacing > 0.0)) throw std::invalid_argument("plane spacing must be positive");
  const std::size_t n = slice.grid.count;
  // kernel[d + n - 1] for sample offset d in (-n, n)
  std::vector<cplx> table(2 * n - 1);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double offset = (static_cast<double>(i) - static_cast<double>(n - 1)) * slice.grid.dx;
    table[i] = rs_kernel(offset, plane_spacing, wavenumber, kernel) * slice.grid.dx;
  }
  FieldSlice out{slice.z + plane_spacing, slice.grid, std::vector<cplx>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < n; ++j) {
      if (slice.values[j] == cplx{}) continue;
      acc += slice.values[j] * table[i + n - 1 - j];
    }
    out.values[i] = acc;
  }
  return out;
}

std::vector<double> absorber_profile(std::size_t count, double fraction) {
  if (!(fraction >= 0.0 && fraction < 0.5)) throw std::invalid_argument("absorber fraction must lie in [0, 0.5)");
  std::vector<double> w(count, 1.0);
  const auto width = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(count)));
  for (std::size_t i = 0; i < width; ++i) {
    const double v = 0.5 - 0.5 * std::cos(kPi * static_cast<double>(i) / static_cast<double>(width));
    w[i] = v;
    w[count - 1 - i] = v;
  }
  return w;
}

PropagationResult propagate(const ApertureExcitation& exc, const Scene& scene, const AsmPropagator& propagator,
                            const PropagationOptions& options) {
  scene.validate();
  const GridSpec& grid = propagator.grid();
  const std::size_t planes = scene.plane_count();
  const double dz = scene.effective_plane_spacing();
  if (std::abs(propagator.plane_spacing() - dz) > 1e-12 * dz)
    throw std::invalid_argument("propagator plane spacing does not match the scene");

  PropagationResult result;
  FieldSlice slice = excitation_to_slice(exc, grid);
  const std::vector<double> taper =
      options.absorber_fraction > 0.0 ? absorber_profile(grid.count, options.absorber_fraction) : std::vector<double>{};
  if (options.retain_every > 0) {
    result.retained.reserve(planes / options.retain_every + 2);
    result.retained.push_back(slice);
  }
  for (std::size_t s = 1; s <= planes; ++s) {
    const double z = static_cast<double>(s) * dz;
    propagator.step(slice.values, scene.blockage_mask(grid, z));
    for (std::size_t i = 0; i < taper.size(); ++i) slice.values[i] *= taper[i];
    slice.z = z;
    if (options.retain_every > 0 && s % options.retain_every == 0) result.retained.push_back(slice);
  }
  result.final_slice = std::move(slice);
  return result;
}

PropagationResult propagate(const ApertureExcitation& exc, const Scene& scene, const GridSpec& grid, double wavenumber,
                            const PropagationOptions& options) {
  scene.validate();
  const AsmPropagator propagator(grid, wavenumber, scene.effective_plane_spacing());
  return propagate(exc, scene, propagator, options);
}

cplx field_at(const FieldSlice& slice, double x) {
  const GridSpec& g = slice.grid;
  if (!g.contains(x)) throw std::invalid_argument("x = " + std::to_string(x) + " lies outside the field grid");
  const double t = (x - g.x_start) / g.dx;
  auto i = static_cast<std::size_t>(std::floor(t));
  if (i >= g.count - 1) i = g.count - 2;
  const double w = t - static_cast<double>(i);
  return (1.0 - w) * slice.values[i] + w * slice.values[i + 1];
}

double received_power(const FieldSlice& final_slice, const ReceiverModel& rx, double x_r) {
  rx.validate();
  return rx.effective_aperture * std::norm(field_at(final_slice, x_r)) / rx.impedance;
}

double achievable_rate(double power, const ReceiverModel& rx) {
  if (!(power >= 0.0)) throw std::invalid_argument("received power must be non-negative");
  rx.validate();
  return std::log2(1.0 + power / rx.noise_power);
}

} // namespace holoairy
