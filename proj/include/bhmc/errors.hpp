// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace bhmc {

/// Thrown when a requested system size does not fit the platform index
/// type (or an exact integer count would overflow 64-bit arithmetic).
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bhmc
