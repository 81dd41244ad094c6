// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "bhmc/propagation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace bhmc {

namespace {

constexpr std::complex<double> kImag(0.0, 1.0);

void check_range(const Eigen::MatrixXd& m, double lo, double hi,
                 const char* name) {
  if (m.size() > 0 && (m.minCoeff() < lo || m.maxCoeff() > hi))
    throw std::invalid_argument(std::string(name) + " entries out of range");
}

}  // namespace

void ControlTrajectory::validate(std::int64_t n_modes) const {
  if (n_steps < 1) throw std::invalid_argument("trajectory needs n_steps >= 1");
  if (total_time < 0.0)
    throw std::invalid_argument("trajectory needs total_time >= 0");
  if (dt != total_time / (3.0 * static_cast<double>(n_steps)))
    throw std::invalid_argument("dt must equal total_time / (3 n_steps)");
  if (hop_strengths.rows() != n_steps || hop_strengths.cols() != n_modes - 1)
    throw std::invalid_argument("hop-strength matrix has wrong shape");
  if (detunings.rows() != n_steps || detunings.cols() != n_modes)
    throw std::invalid_argument("detuning matrix has wrong shape");
  if (interactions.rows() != n_steps || interactions.cols() != n_modes)
    throw std::invalid_argument("interaction matrix has wrong shape");
  check_range(hop_strengths, 0.0, 1.0, "hop-strength");
  check_range(detunings, -1.0, 1.0, "detuning");
  check_range(interactions, -1.0, 1.0, "interaction");
}

Eigen::MatrixXd two_mode_hop_generator(std::int64_t r) {
  if (r < 0) throw std::invalid_argument("pair occupancy must be non-negative");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r + 1, r + 1);
  for (std::int64_t s = 0; s < r; ++s) {
    const double v = std::sqrt(static_cast<double>((s + 1) * (r - s)));
    m(s, s + 1) = v;
    m(s + 1, s) = v;
  }
  return m;
}

HopEigenTable::HopEigenTable(std::int64_t max_pair_occupancy) {
  if (max_pair_occupancy < 0)
    throw std::invalid_argument("pair occupancy must be non-negative");
  values_.reserve(static_cast<std::size_t>(max_pair_occupancy) + 1);
  vectors_.reserve(static_cast<std::size_t>(max_pair_occupancy) + 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  for (std::int64_t r = 0; r <= max_pair_occupancy; ++r) {
    if (r == 0) {
      values_.push_back(Eigen::VectorXd::Zero(1));
      vectors_.push_back(Eigen::MatrixXd::Identity(1, 1));
      continue;
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(r + 1);
    Eigen::VectorXd sub(r);
    for (std::int64_t s = 0; s < r; ++s)
      sub[s] = std::sqrt(static_cast<double>((s + 1) * (r - s)));
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("tridiagonal eigendecomposition failed at r = " +
                               std::to_string(r));
    values_.push_back(solver.eigenvalues());
    vectors_.push_back(solver.eigenvectors());
  }
}

Eigen::MatrixXcd block_unitary(std::int64_t r, double hop_strength, double dt) {
  if (r < 0) throw std::invalid_argument("pair occupancy must be non-negative");
  if (r == 0) return Eigen::MatrixXcd::Identity(1, 1);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(r + 1);
  Eigen::VectorXd sub(r);
  for (std::int64_t s = 0; s < r; ++s)
    sub[s] = std::sqrt(static_cast<double>((s + 1) * (r - s)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("tridiagonal eigendecomposition failed");
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const Eigen::MatrixXd& v = solver.eigenvectors();
  Eigen::VectorXcd phases(r + 1);
  for (std::int64_t i = 0; i <= r; ++i)
    phases[i] = std::polar(1.0, -dt * hop_strength * lambda[i]);
  return v.cast<std::complex<double>>() * phases.asDiagonal() *
         v.transpose().cast<std::complex<double>>();
}

void apply_diagonal_layer_in_place(StateVector& state,
                                   std::span<const double> detunings,
                                   std::span<const double> interactions,
                                   double dt) {
  const FockBasis& basis = state.basis();
  const std::int64_t L = basis.n_modes();
  if (static_cast<std::int64_t>(detunings.size()) != L ||
      static_cast<std::int64_t>(interactions.size()) != L)
    throw std::invalid_argument("control row length does not match mode count");

  Eigen::VectorXcd& amps = state.mutable_amplitudes();
  for (std::int64_t k = 0; k < amps.size(); ++k) {
    OccView occ = basis.state(k);
    double energy = 0.0;
    for (std::int64_t i = 0; i < L; ++i) {
      const double n = occ[static_cast<std::size_t>(i)];
      energy += detunings[static_cast<std::size_t>(i)] * n +
                interactions[static_cast<std::size_t>(i)] * n * (n - 1.0);
    }
    amps[k] *= std::polar(1.0, -dt * energy);
  }
}

StateVector apply_diagonal_layer(const StateVector& state,
                                 std::span<const double> detunings,
                                 std::span<const double> interactions,
                                 double dt) {
  StateVector out = state;
  apply_diagonal_layer_in_place(out, detunings, interactions, dt);
  return out;
}

void apply_bond_hop_in_place(StateVector& state, const PairHopBlocks& blocks,
                             double hop_strength, double dt,
                             const HopEigenTable& eigs) {
  if (blocks.basis_dimension != state.dimension())
    throw std::invalid_argument("block tables were built for a different basis");
  const std::int64_t max_r =
      static_cast<std::int64_t>(blocks.blocks.size()) - 1;
  if (eigs.max_pair_occupancy() < max_r)
    throw std::invalid_argument("eigendecomposition table too small for basis");
  if (hop_strength * dt == 0.0) return;  // exact identity, skip the gather

  Eigen::VectorXcd& amps = state.mutable_amplitudes();
  Eigen::MatrixXd re, im, tmp_re, tmp_im;

  for (const PairHopBlock& block : blocks.blocks) {
    const std::int64_t rows = block.rows();
    const std::int64_t cols = block.n_columns;
    if (cols == 0 || rows == 1) continue;  // r = 0 block is the identity

    re.resize(rows, cols);
    im.resize(rows, cols);
    for (std::int64_t s = 0; s < rows; ++s) {
      for (std::int64_t c = 0; c < cols; ++c) {
        const std::complex<double> a = amps[block.at(s, c)];
        re(s, c) = a.real();
        im(s, c) = a.imag();
      }
    }

    // U = V e^{-i theta lambda} V^T applied as three cheap stages; the
    // (r+1)x(r+1) unitary is never formed.
    const Eigen::MatrixXd& v = eigs.vectors(block.pair_occupancy);
    const Eigen::VectorXd& lambda = eigs.values(block.pair_occupancy);
    tmp_re.noalias() = v.transpose() * re;
    tmp_im.noalias() = v.transpose() * im;
    for (std::int64_t s = 0; s < rows; ++s) {
      const double theta = dt * hop_strength * lambda[s];
      const double c = std::cos(theta);
      const double sn = std::sin(theta);
      for (std::int64_t col = 0; col < cols; ++col) {
        const double x = tmp_re(s, col);
        const double y = tmp_im(s, col);
        tmp_re(s, col) = c * x + sn * y;   // (x + iy) * e^{-i theta}
        tmp_im(s, col) = c * y - sn * x;
      }
    }
    re.noalias() = v * tmp_re;
    im.noalias() = v * tmp_im;

    for (std::int64_t s = 0; s < rows; ++s)
      for (std::int64_t c = 0; c < cols; ++c)
        amps[block.at(s, c)] = {re(s, c), im(s, c)};
  }
}

StateVector apply_bond_hop(const StateVector& state,
                           const PairHopBlocks& blocks, double hop_strength,
                           double dt) {
  StateVector out = state;
  const HopEigenTable eigs(state.basis().n_particles());
  apply_bond_hop_in_place(out, blocks, hop_strength, dt, eigs);
  return out;
}

std::vector<std::int32_t> layer_bonds(std::int64_t n_bonds, LayerParity parity) {
  std::vector<std::int32_t> bonds;
  const std::int32_t first = parity == LayerParity::Odd ? 1 : 2;
  for (std::int32_t b = first; b <= n_bonds; b += 2) bonds.push_back(b);
  return bonds;
}

void apply_hop_layer_in_place(StateVector& state,
                              const std::vector<PairHopBlocks>& bonds,
                              std::span<const double> layer_hops, double dt,
                              LayerParity parity, const HopEigenTable& eigs) {
  const std::int64_t n_bonds = static_cast<std::int64_t>(bonds.size());
  const std::vector<std::int32_t> selected = layer_bonds(n_bonds, parity);
  if (layer_hops.size() != selected.size())
    throw std::invalid_argument("hop-strength count does not match the layer's bonds");
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const PairHopBlocks& table = bonds[static_cast<std::size_t>(selected[i] - 1)];
    if (table.bond != selected[i])
      throw std::invalid_argument("bond table cache is not indexed by bond");
    apply_bond_hop_in_place(state, table, layer_hops[i], dt, eigs);
  }
}

StateVector apply_hop_layer(const StateVector& state,
                            const std::vector<PairHopBlocks>& bonds,
                            std::span<const double> layer_hops, double dt,
                            LayerParity parity) {
  StateVector out = state;
  const HopEigenTable eigs(state.basis().n_particles());
  apply_hop_layer_in_place(out, bonds, layer_hops, dt, parity, eigs);
  return out;
}

PropagationPlan PropagationPlan::build(const FockBasis& basis) {
  PropagationPlan plan{{}, HopEigenTable(basis.n_particles())};
  const std::int64_t L = basis.n_modes();
  plan.bonds.reserve(static_cast<std::size_t>(L > 0 ? L - 1 : 0));
  for (std::int32_t b = 1; b <= L - 1; ++b)
    plan.bonds.push_back(pair_hop_blocks(basis, b));
  return plan;
}

StateVector evolve(const StateVector& initial,
                   const ControlTrajectory& trajectory,
                   const PropagationPlan& plan,
                   BondParityConvention convention) {
  const FockBasis& basis = initial.basis();
  const std::int64_t L = basis.n_modes();
  trajectory.validate(L);
  if (static_cast<std::int64_t>(plan.bonds.size()) != L - 1)
    throw std::invalid_argument("propagation plan does not match the basis");

  const LayerParity second_layer = convention == BondParityConvention::Standard
                                       ? LayerParity::Even
                                       : LayerParity::Odd;
  const LayerParity third_layer = convention == BondParityConvention::Standard
                                      ? LayerParity::Odd
                                      : LayerParity::Even;

  StateVector state = initial;
  std::vector<double> delta_row(static_cast<std::size_t>(L));
  std::vector<double> u_row(static_cast<std::size_t>(L));
  std::vector<double> hops_second, hops_third;

  for (std::int64_t k = 0; k < trajectory.n_steps; ++k) {
    for (std::int64_t i = 0; i < L; ++i) {
      delta_row[static_cast<std::size_t>(i)] = trajectory.detunings(k, i);
      u_row[static_cast<std::size_t>(i)] = trajectory.interactions(k, i);
    }
    apply_diagonal_layer_in_place(state, delta_row, u_row, trajectory.dt);

    hops_second.clear();
    for (std::int32_t b : layer_bonds(L - 1, second_layer))
      hops_second.push_back(trajectory.hop_strengths(k, b - 1));
    apply_hop_layer_in_place(state, plan.bonds, hops_second, trajectory.dt,
                             second_layer, plan.eigs);

    hops_third.clear();
    for (std::int32_t b : layer_bonds(L - 1, third_layer))
      hops_third.push_back(trajectory.hop_strengths(k, b - 1));
    apply_hop_layer_in_place(state, plan.bonds, hops_third, trajectory.dt,
                             third_layer, plan.eigs);
  }

  const double drift = std::abs(state.norm_squared() - 1.0);
  if (drift > 1e-9)
    throw std::runtime_error("norm drifted by " + std::to_string(drift) +
                             " during evolution");
  return state;
}

StateVector evolve(const StateVector& initial,
                   const ControlTrajectory& trajectory) {
  return evolve(initial, trajectory, PropagationPlan::build(initial.basis()));
}

}  // namespace bhmc
