// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace bhmc {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t sm64_scramble(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// Derives a 64-bit stream key from a master seed and a path of integer
/// tags. The derivation is order-sensitive, so (seed, a, b) and
/// (seed, b, a) give unrelated keys. Used to split reproducible,
/// independent random streams across trials / samples / scan points.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed,
                                    std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = detail::sm64_scramble(master_seed + detail::kGolden);
  for (std::uint64_t v : path) {
    h = detail::sm64_scramble((h + detail::kGolden) ^
                              (v * 0xD1B54A32D192ED03ULL));
  }
  return h;
}

/// Counter-style splittable random stream: a xoshiro256++ generator whose
/// state is expanded from a derived key with splitmix64. Every stream is
/// fully determined by (master seed, path); the generator and the
/// uniform/normal conversions below are implemented explicitly so that
/// sequences are bit-reproducible across platforms and standard-library
/// versions.
class RngStream {
 public:
  static RngStream from_key(std::uint64_t key) { return RngStream(key); }

  static RngStream derive(std::uint64_t master_seed,
                          std::initializer_list<std::uint64_t> path) {
    return RngStream(derive_seed(master_seed, path));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result =
        detail::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// One standard complex Gaussian: independent N(0,1) real and
  /// imaginary parts via Box-Muller.
  std::complex<double> standard_complex_normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  explicit RngStream(std::uint64_t key) {
    std::uint64_t h = key;
    bool all_zero = true;
    for (auto& w : s_) {
      h += detail::kGolden;
      w = detail::sm64_scramble(h);
      all_zero = all_zero && w == 0;
    }
    if (all_zero) s_[0] = 1;  // xoshiro must not start at the zero state
  }

  std::uint64_t s_[4];
};

}  // namespace bhmc
