// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <stdexcept>

#include "bhmc/state_vector.hpp"

namespace bhmc {

/// Quantum Fisher information of a pure state with respect to a
/// diagonal generator: F = 4 (sum_k s_k^2 p_k - (sum_k s_k p_k)^2)
/// with p_k = |a_k|^2. Depends only on the probability weights, so it
/// is insensitive to amplitude phases. Clamped at 0 against rounding.
inline double qfi(const StateVector& state, std::span<const double> generator) {
  const auto& amps = state.amplitudes();
  if (static_cast<std::int64_t>(generator.size()) != amps.size())
    throw std::invalid_argument("generator length does not match state dimension");
  double first = 0.0;
  double second = 0.0;
  for (std::int64_t k = 0; k < amps.size(); ++k) {
    const double p = std::norm(amps[k]);
    const double s = generator[static_cast<std::size_t>(k)];
    first += s * p;
    second += s * s * p;
  }
  const double f = 4.0 * (second - first * first);
  return f > 0.0 ? f : 0.0;
}

/// QFI with respect to the basis tilt operator sum_i i * n_i.
inline double qfi(const StateVector& state) {
  return qfi(state, state.basis().tilt_values());
}

}  // namespace bhmc
