// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace bhmc {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kRecordSchemaVersion = 1;

}  // namespace bhmc
