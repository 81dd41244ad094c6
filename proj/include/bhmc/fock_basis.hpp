// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace bhmc {

using OccView = std::span<const std::int32_t>;

/// Occupation-number basis for N bosons in L modes: every vector
/// (n_1, ..., n_L) of non-negative integers with sum N, in descending
/// lexicographic order. Index 0 is therefore (N, 0, ..., 0) and index
/// d-1 is (0, ..., 0, N), which places the two GHZ components at the
/// ends of the index range.
///
/// The basis also carries the tilt eigenvalues s = sum_i i * n_i
/// (1-based site index i), the diagonal of the gravity-tilt generator
/// whose variance defines the QFI.
///
/// Immutable after construction; safe to share across threads.
class FockBasis {
 public:
  FockBasis(std::int64_t n_particles, std::int64_t n_modes);

  std::int64_t n_particles() const { return n_particles_; }
  std::int64_t n_modes() const { return n_modes_; }
  std::int64_t dimension() const { return dimension_; }

  /// Occupation vector of basis state `index` (length L view into
  /// contiguous storage).
  OccView state(std::int64_t index) const {
    return OccView(states_.data() + index * n_modes_,
                   static_cast<std::size_t>(n_modes_));
  }

  bool contains(OccView occupation) const;

  /// Basis index of an occupation vector; throws std::invalid_argument
  /// if the vector is not a member of this basis.
  std::int64_t index_of(OccView occupation) const;

  /// s values aligned with the basis ordering, s in [N, N*L].
  const std::vector<double>& tilt_values() const { return tilt_values_; }

 private:
  // Occupation vectors are packed into fixed-width bit fields for the
  // index dictionary; 128 bits cover every basis that fits in memory
  // except extreme mode counts (N small, L in the hundreds), which fall
  // back to a map keyed by the full vector.
  struct PackedKey {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    bool operator==(const PackedKey&) const = default;
  };
  struct PackedKeyHash {
    std::size_t operator()(const PackedKey& k) const noexcept {
      std::uint64_t h = k.lo * 0x9E3779B97F4A7C15ULL;
      h ^= h >> 29;
      h += k.hi * 0xBF58476D1CE4E5B9ULL;
      h ^= h >> 32;
      return static_cast<std::size_t>(h);
    }
  };
  struct OccHash {
    std::size_t operator()(const std::vector<std::int32_t>& v) const noexcept {
      std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
      for (std::int32_t x : v) {
        h ^= static_cast<std::uint32_t>(x);
        h *= 1099511628211ULL;
      }
      return static_cast<std::size_t>(h);
    }
  };

  PackedKey pack(OccView occupation) const;

  std::int64_t n_particles_;
  std::int64_t n_modes_;
  std::int64_t dimension_;
  int bits_per_site_ = 0;
  bool packable_ = false;
  std::vector<std::int32_t> states_;  // d x L, row-major
  std::vector<double> tilt_values_;
  std::unordered_map<PackedKey, std::int64_t, PackedKeyHash> packed_index_;
  std::unordered_map<std::vector<std::int32_t>, std::int64_t, OccHash>
      fallback_index_;
};

/// Indices of the basis states with pair occupancy n_i + n_{i+1} = r on
/// one bond, arranged as an (r+1) x K_r table: row s holds the states
/// with n_i = s, n_{i+1} = r - s, and each column fixes one
/// configuration of the remaining L-2 modes (ascending lexicographic
/// column order). The hop operator on the bond acts only along rows,
/// which is what lets the propagator work block-by-block.
struct PairHopBlock {
  std::int32_t pair_occupancy = 0;  // r
  std::int64_t n_columns = 0;       // K_r = C(N - r + L - 3, N - r)
  std::vector<std::int64_t> indices;  // (r+1) x K_r, row-major

  std::int64_t rows() const { return pair_occupancy + 1; }
  std::int64_t at(std::int64_t row, std::int64_t col) const {
    return indices[row * n_columns + col];
  }
};

/// All pair-occupancy blocks of one bond; together the tables partition
/// [0, d) (every basis index appears exactly once).
struct PairHopBlocks {
  std::int32_t bond = 0;             // 1-based, couples sites (bond, bond+1)
  std::int64_t basis_dimension = 0;  // d of the basis the tables index into
  std::vector<PairHopBlock> blocks;  // r = 0..N
};

/// Builds the pair-occupancy block tables for one bond (1 <= bond <= L-1).
PairHopBlocks pair_hop_blocks(const FockBasis& basis, std::int32_t bond);

}  // namespace bhmc
