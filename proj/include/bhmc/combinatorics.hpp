// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "bhmc/errors.hpp"

namespace bhmc {

/// Exact binomial coefficient C(n, k) in 64-bit integer arithmetic.
/// Partial products are kept exact through a 128-bit intermediate; a
/// capacity_error is thrown as soon as the running value leaves the
/// signed 64-bit range (results are used as container sizes and
/// Eigen indices downstream, so the signed limit is the binding one).
inline std::uint64_t binomial_checked(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  constexpr std::uint64_t kMax =
      static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;  // exact: the quotient is C(n-k+i, i)
    if (acc > kMax) {
      throw capacity_error("binomial(" + std::to_string(n) + ", " +
                           std::to_string(k) + ") exceeds 64-bit capacity");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

/// Hilbert-space dimension for n_particles bosons in n_modes modes,
/// C(N + L - 1, N). Throws capacity_error on overflow.
inline std::uint64_t bosonic_dimension(std::uint64_t n_particles,
                                       std::uint64_t n_modes) {
  if (n_modes < 1) throw std::invalid_argument("mode count must be positive");
  return binomial_checked(n_particles + n_modes - 1, n_particles);
}

}  // namespace bhmc
