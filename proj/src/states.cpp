// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "bhmc/states.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bhmc {

StateVector fock_state(std::shared_ptr<const FockBasis> basis,
                       OccView occupation) {
  if (!basis) throw std::invalid_argument("fock_state requires a basis");
  const std::int64_t index = basis->index_of(occupation);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis->dimension());
  amps[index] = 1.0;
  return StateVector(std::move(basis), std::move(amps));
}

StateVector ghz_state(std::shared_ptr<const FockBasis> basis, double phase) {
  if (!basis) throw std::invalid_argument("ghz_state requires a basis");
  if (basis->n_modes() < 2)
    throw std::invalid_argument("GHZ state needs at least 2 modes");
  if (basis->n_particles() < 1)
    throw std::invalid_argument("GHZ state needs at least 1 particle");
  const std::int64_t d = basis->dimension();
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(d);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  amps[0] = inv_sqrt2;                                   // (N, 0, ..., 0)
  amps[d - 1] = std::polar(inv_sqrt2, phase);            // (0, ..., 0, N)
  return StateVector(std::move(basis), std::move(amps));
}

StateVector coherent_state(std::shared_ptr<const FockBasis> basis,
                           std::span<const std::complex<double>> mode_amplitudes) {
  if (!basis) throw std::invalid_argument("coherent_state requires a basis");
  const std::int64_t L = basis->n_modes();
  const std::int64_t N = basis->n_particles();
  if (static_cast<std::int64_t>(mode_amplitudes.size()) != L)
    throw std::invalid_argument("mode amplitude length does not match mode count");

  double norm2 = 0.0;
  for (const auto& a : mode_amplitudes) norm2 += std::norm(a);
  if (!(norm2 > 0.0))
    throw std::invalid_argument("coherent state requires a nonzero mode vector");
  const double log_norm = 0.5 * std::log(norm2);

  // Work in log space: the multinomial prefactor sqrt(N!/prod n_i!) and
  // the power products both overflow double separately for N ~ 200,
  // while their combination is bounded by 1.
  const std::int64_t d = basis->dimension();
  Eigen::VectorXcd amps(d);
  const double log_fact_n = std::lgamma(static_cast<double>(N) + 1.0);
  for (std::int64_t k = 0; k < d; ++k) {
    OccView occ = basis->state(k);
    double log_mag = 0.5 * log_fact_n;
    double arg = 0.0;
    bool zero = false;
    for (std::int64_t i = 0; i < L; ++i) {
      const std::int32_t n = occ[static_cast<std::size_t>(i)];
      if (n == 0) continue;
      const std::complex<double> a = mode_amplitudes[static_cast<std::size_t>(i)];
      if (a == std::complex<double>(0.0, 0.0)) {
        zero = true;
        break;
      }
      log_mag += n * (std::log(std::abs(a)) - log_norm);
      log_mag -= 0.5 * std::lgamma(static_cast<double>(n) + 1.0);
      arg += n * std::arg(a);
    }
    amps[k] = zero ? 0.0 : std::polar(std::exp(log_mag), arg);
  }
  amps /= amps.norm();  // remove floating-point dust; exact norm is 1
  return StateVector(std::move(basis), std::move(amps));
}

StateVector haar_random_state(std::shared_ptr<const FockBasis> basis,
                              RngStream& rng) {
  if (!basis) throw std::invalid_argument("haar_random_state requires a basis");
  const std::int64_t d = basis->dimension();
  Eigen::VectorXcd amps(d);
  double norm = 0.0;
  do {
    for (std::int64_t k = 0; k < d; ++k)
      amps[k] = rng.standard_complex_normal();
    norm = amps.norm();
  } while (!(norm > 0.0));
  amps /= norm;
  return StateVector(std::move(basis), std::move(amps));
}

}  // namespace bhmc
