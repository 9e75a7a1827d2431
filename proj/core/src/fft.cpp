// SPDX-License-Identifier: Apache-2.0

#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace holoairy::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::vector<std::complex<double>>& v) { return reinterpret_cast<fftw_complex*>(v.data()); }

} // namespace

Fft1d::Fft1d(std::size_t n) : n_(n), forward_plan_(nullptr), inverse_plan_(nullptr) {
  if (n == 0) throw std::invalid_argument("FFT size must be positive");
  // Plans are made on scratch buffers and executed with the new-array API, so
  // they must not assume any particular alignment of the caller's data.
  std::vector<std::complex<double>> scratch(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const int size = static_cast<int>(n);
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_1d(size, as_fftw(scratch), as_fftw(scratch), FFTW_FORWARD, flags);
  inverse_plan_ = fftw_plan_dft_1d(size, as_fftw(scratch), as_fftw(scratch), FFTW_BACKWARD, flags);
  if (!forward_plan_ || !inverse_plan_) throw std::runtime_error("FFTW planning failed");
}

Fft1d::~Fft1d() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void Fft1d::forward(std::vector<std::complex<double>>& data) const {
  if (data.size() != n_) throw std::invalid_argument("FFT size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data), as_fftw(data));
}

void Fft1d::inverse(std::vector<std::complex<double>>& data) const {
  if (data.size() != n_) throw std::invalid_argument("FFT size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), as_fftw(data), as_fftw(data));
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : data) v *= scale;
}

} // namespace holoairy::detail
