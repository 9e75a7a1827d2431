// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "holoairy/constants.hpp"

namespace holoairy {

// Per-element complex excitation of a 1-D aperture lying on z = 0. The weight
// of element n is the field it launches; |weight|^2 is its radiated power.
struct ApertureExcitation {
  std::vector<double> positions; // x_n [m]
  std::vector<cplx> weights;     // M_n
  double power_budget = 0.0;     // P_t [W]

  std::size_t size() const { return weights.size(); }
  double total_power() const;
  // Throws std::invalid_argument if lengths differ, values are non-finite or
  // the total exceeds the budget by more than `tolerance` (relative).
  void validate(double tolerance = 1e-12) const;
};

} // namespace holoairy
