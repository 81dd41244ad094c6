// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <complex>
#include <memory>
#include <stdexcept>
#include <utility>

#include "bhmc/fock_basis.hpp"

namespace bhmc {

/// Normalized complex amplitude vector over a Fock basis. Construction
/// enforces sum |a_k|^2 = 1 within 1e-10; the propagation kernels only
/// ever apply unitaries, so the norm is preserved rather than corrected
/// afterwards.
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-10;

  StateVector(std::shared_ptr<const FockBasis> basis,
              Eigen::VectorXcd amplitudes)
      : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (!basis_) throw std::invalid_argument("state requires a basis");
    if (amplitudes_.size() != basis_->dimension())
      throw std::invalid_argument("amplitude length does not match basis dimension");
    const double n2 = amplitudes_.squaredNorm();
    if (std::abs(n2 - 1.0) > kNormTolerance)
      throw std::invalid_argument("state vector is not normalized");
  }

  const FockBasis& basis() const { return *basis_; }
  const std::shared_ptr<const FockBasis>& basis_ptr() const { return basis_; }

  std::int64_t dimension() const { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

  /// Mutable access for the evolution kernels; callers are responsible
  /// for applying norm-preserving maps only.
  Eigen::VectorXcd& mutable_amplitudes() { return amplitudes_; }

  double norm_squared() const { return amplitudes_.squaredNorm(); }

 private:
  std::shared_ptr<const FockBasis> basis_;
  Eigen::VectorXcd amplitudes_;
};

}  // namespace bhmc
