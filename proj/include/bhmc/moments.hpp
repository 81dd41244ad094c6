// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>

#include "bhmc/fock_basis.hpp"

namespace bhmc {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Haar moment of probability weights,
///   M_{r_1...r_l} = r_1! ... r_l! (d-1)! / (d + r_1 + ... + r_l - 1)!,
/// evaluated as an incremental product (no raw factorials), so it stays
/// finite at dimensions ~ 1e7 and beyond.
double haar_moment(std::uint64_t dimension, std::span<const int> exponents);

/// Closed-form power sum S_k = sum over basis states of s^k for the
/// tilt eigenvalue s = sum_i i * n_i, for k = 1..4. Exact integer
/// result (rational intermediates, integrality asserted).
BigInt tilt_power_sum(std::int64_t n_particles, std::int64_t n_modes, int k);

/// Independent oracle for tilt_power_sum: direct enumeration over the
/// basis. Exact; use only when d is small enough to enumerate.
BigInt brute_force_tilt_power_sum(const FockBasis& basis, int k);

/// Exact Haar mean of the QFI, mu = d/(d+1) * N(L-1)(N+L)/3, evaluated
/// in rational arithmetic. Also derived internally through the
/// moments-and-sums route 4*(M1*S2 - M11*(S1^2 - S2) - M2*S2); the two
/// must agree exactly and the evaluation asserts that they do.
BigRational qfi_mean_exact_rational(std::int64_t n_particles,
                                    std::int64_t n_modes);
double qfi_mean_exact(std::int64_t n_particles, std::int64_t n_modes);

/// Exact Haar second moment of the QFI,
///   E[F^2] = 16/(d(d+1)(d+2)(d+3)) * (S1^4 - 2d S1^2 S2 - (4d+4) S1 S3
///            + (d^2+3d+3) S2^2 + (d^2+d) S4).
BigRational qfi_second_moment_exact_rational(std::int64_t n_particles,
                                             std::int64_t n_modes);

/// Exact Haar variance of the QFI: the closed braced form
///   2 N d (L-1)(N+L) / (45 (d+1)^2 (d+2)(d+3))
///     * { N(N+L)[5L(d^2+3d+3) - (8d^2+21d+18)] - 3L(L-1)(d+1)^2 },
/// cross-checked against E[F^2] - mu^2 to 1e-10 relative.
BigRational qfi_variance_exact_rational(std::int64_t n_particles,
                                        std::int64_t n_modes);
double qfi_variance_exact(std::int64_t n_particles, std::int64_t n_modes);

/// One-sided Chebyshev bound on the upper tail: for f0 >= mean,
/// Pr(F >= f0) <= sigma^2 / (sigma^2 + (f0 - mean)^2).
double cantelli_upper(double f0, double mean, double stddev);

/// Lower bound on the same tail mass for f0 <= mean:
/// Pr(F >= f0) >= (mean - f0)^2 / (sigma^2 + (mean - f0)^2);
/// in particular 1/2 at f0 = mean - sigma.
double cantelli_lower(double f0, double mean, double stddev);

/// Exact and reference QFI statistics for one system size.
struct QfiStatistics {
  std::int64_t n_particles = 0;
  std::int64_t n_modes = 0;
  std::uint64_t dimension = 0;
  double mean_exact = 0.0;      // mu
  double variance_exact = 0.0;  // sigma^2
  double mean_leading = 0.0;    // (N^2 L + N L^2) / 3
  double std_leading = 0.0;     // mean_leading / sqrt(d/2)
  double sql = 0.0;             // N (L-1)^2
  double hl = 0.0;              // N^2 (L-1)^2
};

QfiStatistics qfi_statistics(std::int64_t n_particles, std::int64_t n_modes);

/// Metrological reference scales for phase acquisition time tau.
struct ReferenceLimits {
  double sql_qfi = 0.0;        // N (L-1)^2
  double hl_qfi = 0.0;         // N^2 (L-1)^2
  double delta_eta_sql = 0.0;  // 1 / ((L-1) sqrt(N) tau)
  double delta_eta_hl = 0.0;   // 1 / ((L-1) N tau)
};

ReferenceLimits reference_limits(std::int64_t n_particles,
                                 std::int64_t n_modes,
                                 double acquisition_time);

/// Phase precision from a QFI value: delta_phi = 1 / sqrt(F).
double delta_phi(double qfi_value);

}  // namespace bhmc
