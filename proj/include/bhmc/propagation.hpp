// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "bhmc/state_vector.hpp"

namespace bhmc {

/// One candidate preparation sequence: piecewise-constant controls for
/// n three-layer Trotter blocks. Each block applies, for a slice of
/// length dt = total_time / (3 n_steps), the diagonal part (detunings
/// and on-site interactions), then the even-bond hops, then the
/// odd-bond hops.
struct ControlTrajectory {
  double total_time = 0.0;   // units of inverse typical hopping rate
  std::int64_t n_steps = 0;  // n
  double dt = 0.0;           // total_time / (3 n_steps)

  Eigen::MatrixXd hop_strengths;  // n x (L-1), entries in [0, 1]
  Eigen::MatrixXd detunings;      // n x L, entries in [-1, 1]
  Eigen::MatrixXd interactions;   // n x L, entries in [-1, 1]

  /// Shape, time-slicing and control-range checks against a target
  /// system with n_modes modes.
  void validate(std::int64_t n_modes) const;
};

/// Bond sets of the two alternating hop layers (1-based bonds; bond i
/// couples sites i and i+1). The odd layer covers bonds 1, 3, 5, ...,
/// the even layer covers bonds 2, 4, .... Under the standard
/// convention the per-block order is: diagonal, even layer, odd layer.
enum class LayerParity { Even, Odd };

/// Which bond set each hop layer addresses. Swapped exchanges the two
/// (only relabels the random controls in a Monte-Carlo run; exposed
/// for sensitivity checks).
enum class BondParityConvention { Standard, Swapped };

/// Hop generator for r bosons on one bond: the (r+1) x (r+1) symmetric
/// tridiagonal matrix of a^dag_1 a_2 + a^dag_2 a_1 in the two-mode
/// basis |s, r-s>, with off-diagonals sqrt((s+1)(r-s)).
Eigen::MatrixXd two_mode_hop_generator(std::int64_t r);

/// Eigendecompositions of the two-mode hop generators for r = 0..max,
/// shared by every bond and every step (the generator depends only on
/// r; the control strength enters through the phases alone).
/// Immutable after construction.
class HopEigenTable {
 public:
  explicit HopEigenTable(std::int64_t max_pair_occupancy);

  std::int64_t max_pair_occupancy() const {
    return static_cast<std::int64_t>(values_.size()) - 1;
  }
  const Eigen::VectorXd& values(std::int64_t r) const {
    return values_[static_cast<std::size_t>(r)];
  }
  const Eigen::MatrixXd& vectors(std::int64_t r) const {
    return vectors_[static_cast<std::size_t>(r)];
  }

 private:
  std::vector<Eigen::VectorXd> values_;
  std::vector<Eigen::MatrixXd> vectors_;
};

/// Two-mode bond propagator exp(-i dt J M_r), unitary to machine
/// precision (built from the symmetric eigendecomposition of M_r).
Eigen::MatrixXcd block_unitary(std::int64_t r, double hop_strength, double dt);

/// Diagonal Trotter layer: multiplies each amplitude by
/// exp(-i dt (sum_i delta_i n_i + u_i n_i (n_i - 1))). Phases only, so
/// the norm is preserved exactly.
void apply_diagonal_layer_in_place(StateVector& state,
                                   std::span<const double> detunings,
                                   std::span<const double> interactions,
                                   double dt);
StateVector apply_diagonal_layer(const StateVector& state,
                                 std::span<const double> detunings,
                                 std::span<const double> interactions,
                                 double dt);

/// Single-bond hop propagator exp(-i dt J (a^dag_i a_{i+1} + h.c.))
/// applied blockwise: within each pair-occupancy block the amplitudes
/// form an (r+1) x K_r matrix that is left-multiplied by the two-mode
/// unitary, realized as V_r e^{-i dt J lambda} V_r^T through the cached
/// eigendecomposition.
void apply_bond_hop_in_place(StateVector& state, const PairHopBlocks& blocks,
                             double hop_strength, double dt,
                             const HopEigenTable& eigs);
StateVector apply_bond_hop(const StateVector& state,
                           const PairHopBlocks& blocks, double hop_strength,
                           double dt);

/// One alternating hop layer: the bond propagators of the layer's
/// parity applied in increasing bond order. The bonds of one layer are
/// disjoint, so their propagators commute and the product equals the
/// exponential of the whole layer Hamiltonian. `layer_hops` holds the
/// hop strengths for exactly the layer's bonds, in increasing bond
/// order.
void apply_hop_layer_in_place(StateVector& state,
                              const std::vector<PairHopBlocks>& bonds,
                              std::span<const double> layer_hops, double dt,
                              LayerParity parity, const HopEigenTable& eigs);
StateVector apply_hop_layer(const StateVector& state,
                            const std::vector<PairHopBlocks>& bonds,
                            std::span<const double> layer_hops, double dt,
                            LayerParity parity);

/// Bonds of one parity among 1..n_bonds (1-based), increasing.
std::vector<std::int32_t> layer_bonds(std::int64_t n_bonds, LayerParity parity);

/// Precomputed structural tables for propagation over one basis: the
/// per-bond pair-occupancy blocks plus the shared eigendecompositions.
/// Build once, share across concurrent evolutions.
struct PropagationPlan {
  std::vector<PairHopBlocks> bonds;  // index b holds bond b+1
  HopEigenTable eigs;

  static PropagationPlan build(const FockBasis& basis);
};

/// Full three-layer Trotter evolution of `initial` under `trajectory`:
/// for each block k applies the diagonal layer, the even hop layer and
/// the odd hop layer with the k-th control rows. Deterministic given
/// its inputs; the final norm is asserted to be within 1e-9 of 1 (never
/// corrected, so drift would surface as an error rather than be hidden).
StateVector evolve(const StateVector& initial,
                   const ControlTrajectory& trajectory,
                   const PropagationPlan& plan,
                   BondParityConvention convention = BondParityConvention::Standard);

/// Convenience overload that builds the plan on the fly.
StateVector evolve(const StateVector& initial,
                   const ControlTrajectory& trajectory);

}  // namespace bhmc
