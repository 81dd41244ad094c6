// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <memory>
#include <span>

#include "bhmc/rng.hpp"
#include "bhmc/state_vector.hpp"

namespace bhmc {

/// Fock basis state |n_1 ... n_L> (unit amplitude at one index).
StateVector fock_state(std::shared_ptr<const FockBasis> basis,
                       OccView occupation);

/// GHZ-like state (|N 0...0> + e^{i phase} |0...0 N>) / sqrt(2).
/// Requires L >= 2 and N >= 1 (for N = 0 the two components coincide
/// and the state is not normalizable for every phase).
StateVector ghz_state(std::shared_ptr<const FockBasis> basis,
                      double phase = 0.0);

/// N-boson coherent state over the single-particle wavefunction
/// `mode_amplitudes` (normalized internally; zero input rejected):
/// amplitude on |n_1...n_L> proportional to
/// sqrt(N! / prod n_i!) * prod alpha_i^{n_i}.
StateVector coherent_state(std::shared_ptr<const FockBasis> basis,
                           std::span<const std::complex<double>> mode_amplitudes);

/// Haar-random pure state: d independent standard complex Gaussians,
/// normalized. The distribution is invariant under any fixed unitary.
StateVector haar_random_state(std::shared_ptr<const FockBasis> basis,
                              RngStream& rng);

}  // namespace bhmc
