// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "bhmc/fock_basis.hpp"
#include "bhmc/propagation.hpp"

namespace bhmc::reference {

/// Dense d x d matrix of a^dag_i a_{i+1} + a^dag_{i+1} a_i for one bond
/// (1-based), assembled element-by-element from the occupation vectors.
/// Deliberately shares nothing with the blockwise propagation path; it
/// exists to check that path.
Eigen::MatrixXd bond_hop_hamiltonian(const FockBasis& basis, std::int32_t bond);

/// Diagonal of sum_i delta_i n_i + u_i n_i (n_i - 1) over the basis.
Eigen::VectorXd diagonal_hamiltonian(const FockBasis& basis,
                                     const Eigen::VectorXd& detunings,
                                     const Eigen::VectorXd& interactions);

/// exp(-i dt H) for a real symmetric H via full dense eigendecomposition.
Eigen::MatrixXcd hermitian_propagator(const Eigen::MatrixXd& hamiltonian,
                                      double dt);

/// Reference three-layer evolution: each layer Hamiltonian is built as
/// a dense matrix (the hop layers as sums over their bonds) and
/// exponentiated whole. O(d^3) per layer; for small d only.
Eigen::VectorXcd evolve_dense(
    const FockBasis& basis, const Eigen::VectorXcd& initial,
    const ControlTrajectory& trajectory,
    BondParityConvention convention = BondParityConvention::Standard);

}  // namespace bhmc::reference
