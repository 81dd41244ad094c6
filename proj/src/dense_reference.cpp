// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "bhmc/dense_reference.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace bhmc::reference {

Eigen::MatrixXd bond_hop_hamiltonian(const FockBasis& basis,
                                     std::int32_t bond) {
  const std::int64_t L = basis.n_modes();
  if (bond < 1 || bond > L - 1)
    throw std::invalid_argument("bond index out of range");
  const std::int64_t d = basis.dimension();
  const std::int64_t site = bond - 1;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  std::vector<std::int32_t> target(static_cast<std::size_t>(L));
  for (std::int64_t k = 0; k < d; ++k) {
    OccView occ = basis.state(k);
    const std::int32_t n_left = occ[static_cast<std::size_t>(site)];
    const std::int32_t n_right = occ[static_cast<std::size_t>(site + 1)];
    if (n_right == 0) continue;
    // a^dag_site a_{site+1} |occ>
    for (std::int64_t i = 0; i < L; ++i)
      target[static_cast<std::size_t>(i)] = occ[static_cast<std::size_t>(i)];
    target[static_cast<std::size_t>(site)] = n_left + 1;
    target[static_cast<std::size_t>(site + 1)] = n_right - 1;
    const std::int64_t j = basis.index_of(target);
    const double v = std::sqrt(static_cast<double>(n_left + 1) *
                               static_cast<double>(n_right));
    h(j, k) += v;
    h(k, j) += v;  // hermitian partner a^dag_{site+1} a_site
  }
  return h;
}

Eigen::VectorXd diagonal_hamiltonian(const FockBasis& basis,
                                     const Eigen::VectorXd& detunings,
                                     const Eigen::VectorXd& interactions) {
  const std::int64_t L = basis.n_modes();
  if (detunings.size() != L || interactions.size() != L)
    throw std::invalid_argument("control row length does not match mode count");
  const std::int64_t d = basis.dimension();
  Eigen::VectorXd diag(d);
  for (std::int64_t k = 0; k < d; ++k) {
    OccView occ = basis.state(k);
    double e = 0.0;
    for (std::int64_t i = 0; i < L; ++i) {
      const double n = occ[static_cast<std::size_t>(i)];
      e += detunings[i] * n + interactions[i] * n * (n - 1.0);
    }
    diag[k] = e;
  }
  return diag;
}

Eigen::MatrixXcd hermitian_propagator(const Eigen::MatrixXd& hamiltonian,
                                      double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dense eigendecomposition failed");
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const Eigen::MatrixXd& v = solver.eigenvectors();
  Eigen::VectorXcd phases(lambda.size());
  for (std::int64_t i = 0; i < lambda.size(); ++i)
    phases[i] = std::polar(1.0, -dt * lambda[i]);
  return v.cast<std::complex<double>>() * phases.asDiagonal() *
         v.transpose().cast<std::complex<double>>();
}

Eigen::VectorXcd evolve_dense(const FockBasis& basis,
                              const Eigen::VectorXcd& initial,
                              const ControlTrajectory& trajectory,
                              BondParityConvention convention) {
  const std::int64_t L = basis.n_modes();
  const std::int64_t d = basis.dimension();
  trajectory.validate(L);
  if (initial.size() != d)
    throw std::invalid_argument("state length does not match basis dimension");

  const LayerParity second = convention == BondParityConvention::Standard
                                 ? LayerParity::Even
                                 : LayerParity::Odd;
  const LayerParity third = convention == BondParityConvention::Standard
                                ? LayerParity::Odd
                                : LayerParity::Even;

  std::vector<Eigen::MatrixXd> bond_h;
  for (std::int32_t b = 1; b <= L - 1; ++b)
    bond_h.push_back(bond_hop_hamiltonian(basis, b));

  auto layer_propagator = [&](std::int64_t step, LayerParity parity) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    for (std::int32_t b : layer_bonds(L - 1, parity))
      h += trajectory.hop_strengths(step, b - 1) *
           bond_h[static_cast<std::size_t>(b - 1)];
    return hermitian_propagator(h, trajectory.dt);
  };

  Eigen::VectorXcd psi = initial;
  for (std::int64_t k = 0; k < trajectory.n_steps; ++k) {
    const Eigen::VectorXd diag = diagonal_hamiltonian(
        basis, trajectory.detunings.row(k), trajectory.interactions.row(k));
    for (std::int64_t i = 0; i < d; ++i)
      psi[i] *= std::polar(1.0, -trajectory.dt * diag[i]);
    psi = layer_propagator(k, second) * psi;
    psi = layer_propagator(k, third) * psi;
  }
  return psi;
}

}  // namespace bhmc::reference
