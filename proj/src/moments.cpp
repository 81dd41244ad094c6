// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "bhmc/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bhmc/combinatorics.hpp"

namespace bhmc {

namespace {

// Exact binomial in arbitrary precision (no capacity limit; used by the
// closed forms, which never materialize the basis).
BigInt big_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt acc = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    acc *= n - k + i;
    acc /= i;
  }
  return acc;
}

BigInt big_dimension(std::int64_t n_particles, std::int64_t n_modes) {
  return big_binomial(n_particles + n_modes - 1, n_particles);
}

BigInt require_integer(const BigRational& value, const char* what) {
  if (denominator(value) != 1) throw std::logic_error(what);
  return numerator(value);
}

double to_double(const BigRational& value) {
  // cpp_rational::convert_to<double> performs a correctly scaled
  // division of the (possibly huge) numerator and denominator.
  return value.convert_to<double>();
}

struct PowerSums {
  BigInt s1, s2, s3, s4;
};

PowerSums power_sums(std::int64_t n_particles, std::int64_t n_modes) {
  return PowerSums{tilt_power_sum(n_particles, n_modes, 1),
                   tilt_power_sum(n_particles, n_modes, 2),
                   tilt_power_sum(n_particles, n_modes, 3),
                   tilt_power_sum(n_particles, n_modes, 4)};
}

}  // namespace

double haar_moment(std::uint64_t dimension, std::span<const int> exponents) {
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  if (exponents.size() > dimension)
    throw std::invalid_argument("more weight factors than basis states");
  std::uint64_t total = 0;
  double numerator = 1.0;
  for (int r : exponents) {
    if (r < 1) throw std::invalid_argument("exponents must be positive");
    for (int i = 2; i <= r; ++i) numerator *= i;  // r!
    total += static_cast<std::uint64_t>(r);
  }
  // (d-1)! / (d+total-1)! = 1 / (d (d+1) ... (d+total-1))
  double result = numerator;
  for (std::uint64_t i = 0; i < total; ++i)
    result /= static_cast<double>(dimension + i);
  return result;
}

BigInt tilt_power_sum(std::int64_t n_particles, std::int64_t n_modes, int k) {
  if (n_particles < 0)
    throw std::invalid_argument("particle count must be non-negative");
  if (n_modes < 1) throw std::invalid_argument("mode count must be positive");
  if (k < 1 || k > 4)
    throw std::invalid_argument("tilt power sums are available for k = 1..4");

  const BigInt N = n_particles;
  const BigInt L = n_modes;
  const BigInt d = big_dimension(n_particles, n_modes);

  BigRational value;
  switch (k) {
    case 1:
      value = BigRational(d * N * (L + 1), 2);
      break;
    case 2:
      value = BigRational(d * ((3 * L * L + 7 * L + 2) * N * N +
                               L * (L - 1) * N),
                          12);
      break;
    case 3: {
      // d * ((L^3/8 + L^2/2 + 3L/8) N^3 + (L^3/8 - L/8) N^2)
      const BigInt cubic = (L * L * L + 4 * L * L + 3 * L) * N * N * N;
      const BigInt quadratic = (L * L * L - L) * N * N;
      value = BigRational(d * (cubic + quadratic), 8);
      break;
    }
    case 4: {
      const BigInt L2 = L * L, L3 = L2 * L, L4 = L2 * L2;
      const BigInt N2 = N * N, N3 = N2 * N, N4 = N2 * N2;
      const BigInt bracket =
          (15 * L4 + 90 * L3 + 125 * L2 + 18 * L - 8) * N4 +
          (30 * L4 + 40 * L3 - 54 * L2 - 16 * L) * N3 +
          (5 * L4 - 14 * L3 + 11 * L2 - 2 * L) * N2 -
          2 * L2 * (L - 1) * (L - 1) * N;
      value = BigRational(d * bracket, 240);
      break;
    }
  }
  return require_integer(value, "tilt power sum is not an integer");
}

BigInt brute_force_tilt_power_sum(const FockBasis& basis, int k) {
  if (k < 1) throw std::invalid_argument("power must be positive");
  BigInt total = 0;
  const std::int64_t L = basis.n_modes();
  for (std::int64_t idx = 0; idx < basis.dimension(); ++idx) {
    OccView occ = basis.state(idx);
    std::int64_t s = 0;
    for (std::int64_t i = 0; i < L; ++i)
      s += (i + 1) * occ[static_cast<std::size_t>(i)];
    BigInt term = 1;
    for (int p = 0; p < k; ++p) term *= s;
    total += term;
  }
  return total;
}

BigRational qfi_mean_exact_rational(std::int64_t n_particles,
                                    std::int64_t n_modes) {
  if (n_particles < 0)
    throw std::invalid_argument("particle count must be non-negative");
  if (n_modes < 1) throw std::invalid_argument("mode count must be positive");

  const BigInt N = n_particles;
  const BigInt L = n_modes;
  const BigInt d = big_dimension(n_particles, n_modes);

  const BigRational closed =
      BigRational(d, d + 1) * BigRational(N * (L - 1) * (N + L), 3);

  // Independent route via Haar moments and power sums.
  const PowerSums s = power_sums(n_particles, n_modes);
  const BigRational m1(1, d);
  const BigRational m11(1, d * (d + 1));
  const BigRational m2(2, d * (d + 1));
  const BigRational via_moments =
      4 * (m1 * s.s2 - m11 * (s.s1 * s.s1 - s.s2) - m2 * s.s2);

  if (closed != via_moments)
    throw std::logic_error("QFI mean routes disagree");
  return closed;
}

double qfi_mean_exact(std::int64_t n_particles, std::int64_t n_modes) {
  return to_double(qfi_mean_exact_rational(n_particles, n_modes));
}

BigRational qfi_second_moment_exact_rational(std::int64_t n_particles,
                                             std::int64_t n_modes) {
  const BigInt d = big_dimension(n_particles, n_modes);
  const PowerSums s = power_sums(n_particles, n_modes);
  const BigInt s1_sq = s.s1 * s.s1;
  const BigInt poly = s1_sq * s1_sq - 2 * d * s1_sq * s.s2 -
                      (4 * d + 4) * s.s1 * s.s3 +
                      (d * d + 3 * d + 3) * s.s2 * s.s2 +
                      (d * d + d) * s.s4;
  return BigRational(16 * poly, d * (d + 1) * (d + 2) * (d + 3));
}

BigRational qfi_variance_exact_rational(std::int64_t n_particles,
                                        std::int64_t n_modes) {
  if (n_particles < 0)
    throw std::invalid_argument("particle count must be non-negative");
  if (n_modes < 1) throw std::invalid_argument("mode count must be positive");

  const BigInt N = n_particles;
  const BigInt L = n_modes;
  const BigInt d = big_dimension(n_particles, n_modes);
  const BigInt dp1 = d + 1;

  const BigInt braced =
      N * (N + L) * (5 * L * (d * d + 3 * d + 3) -
                     (8 * d * d + 21 * d + 18)) -
      3 * L * (L - 1) * dp1 * dp1;
  const BigRational closed(2 * N * d * (L - 1) * (N + L) * braced,
                           45 * dp1 * dp1 * (d + 2) * (d + 3));

  // Second route: E[F^2] - mu^2.
  const BigRational mu = qfi_mean_exact_rational(n_particles, n_modes);
  const BigRational via_moments =
      qfi_second_moment_exact_rational(n_particles, n_modes) - mu * mu;

  // The two derivations are algebraically identical; tolerate nothing
  // beyond 1e-10 relative in case either published form had a typo.
  const BigRational diff =
      closed >= via_moments ? closed - via_moments : via_moments - closed;
  const BigRational scale = via_moments >= 0 ? via_moments : -via_moments;
  if (diff * 10000000000LL > scale)
    throw std::logic_error("QFI variance routes disagree");
  return closed;
}

double qfi_variance_exact(std::int64_t n_particles, std::int64_t n_modes) {
  return to_double(qfi_variance_exact_rational(n_particles, n_modes));
}

double cantelli_upper(double f0, double mean, double stddev) {
  if (!(stddev > 0.0)) throw std::invalid_argument("stddev must be positive");
  if (f0 < mean)
    throw std::invalid_argument("upper bound applies for f0 >= mean");
  const double t = f0 - mean;
  const double v = stddev * stddev;
  return v / (v + t * t);
}

double cantelli_lower(double f0, double mean, double stddev) {
  if (!(stddev > 0.0)) throw std::invalid_argument("stddev must be positive");
  if (f0 > mean)
    throw std::invalid_argument("lower bound applies for f0 <= mean");
  const double t = mean - f0;
  const double v = stddev * stddev;
  return (t * t) / (v + t * t);
}

QfiStatistics qfi_statistics(std::int64_t n_particles, std::int64_t n_modes) {
  QfiStatistics stats;
  stats.n_particles = n_particles;
  stats.n_modes = n_modes;
  stats.dimension = bosonic_dimension(static_cast<std::uint64_t>(n_particles),
                                      static_cast<std::uint64_t>(n_modes));
  stats.mean_exact = qfi_mean_exact(n_particles, n_modes);
  stats.variance_exact = qfi_variance_exact(n_particles, n_modes);

  const double n = static_cast<double>(n_particles);
  const double l = static_cast<double>(n_modes);
  const double lm1 = l - 1.0;
  stats.mean_leading = (n * n * l + n * l * l) / 3.0;
  stats.std_leading =
      stats.mean_leading / std::sqrt(static_cast<double>(stats.dimension) / 2.0);
  stats.sql = n * lm1 * lm1;
  stats.hl = n * n * lm1 * lm1;
  return stats;
}

ReferenceLimits reference_limits(std::int64_t n_particles,
                                 std::int64_t n_modes,
                                 double acquisition_time) {
  if (n_modes < 2) throw std::invalid_argument("reference limits need L >= 2");
  if (n_particles < 1)
    throw std::invalid_argument("reference limits need N >= 1");
  if (!(acquisition_time > 0.0))
    throw std::invalid_argument("acquisition time must be positive");
  const double n = static_cast<double>(n_particles);
  const double lm1 = static_cast<double>(n_modes) - 1.0;
  ReferenceLimits limits;
  limits.sql_qfi = n * lm1 * lm1;
  limits.hl_qfi = n * n * lm1 * lm1;
  limits.delta_eta_sql = 1.0 / (lm1 * std::sqrt(n) * acquisition_time);
  limits.delta_eta_hl = 1.0 / (lm1 * n * acquisition_time);
  return limits;
}

double delta_phi(double qfi_value) {
  if (qfi_value < 0.0) throw std::invalid_argument("QFI must be non-negative");
  return 1.0 / std::sqrt(qfi_value);  // +inf at F = 0
}

}  // namespace bhmc
