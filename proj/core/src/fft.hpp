// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace holoairy::detail {

// In-place 1-D complex FFT pair backed by FFTW. Plans use FFTW_ESTIMATE so the
// chosen algorithm, and therefore every output bit, does not depend on timing.
// Execution is re-entrant; construction serialises on the FFTW planner.
class Fft1d {
public:
  explicit Fft1d(std::size_t n);
  ~Fft1d();
  Fft1d(const Fft1d&) = delete;
  Fft1d& operator=(const Fft1d&) = delete;

  std::size_t size() const { return n_; }
  // Unnormalised forward transform (e^{-j...}).
  void forward(std::vector<std::complex<double>>& data) const;
  // Inverse transform scaled by 1/n.
  void inverse(std::vector<std::complex<double>>& data) const;

private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

} // namespace holoairy::detail
