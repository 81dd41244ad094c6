// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "bhmc/fock_basis.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "bhmc/combinatorics.hpp"

namespace bhmc {

FockBasis::PackedKey FockBasis::pack(OccView occupation) const {
  unsigned __int128 key = 0;
  int shift = 0;
  for (std::int32_t v : occupation) {
    key |= static_cast<unsigned __int128>(static_cast<std::uint32_t>(v))
           << shift;
    shift += bits_per_site_;
  }
  return PackedKey{static_cast<std::uint64_t>(key),
                   static_cast<std::uint64_t>(key >> 64)};
}

FockBasis::FockBasis(std::int64_t n_particles, std::int64_t n_modes)
    : n_particles_(n_particles), n_modes_(n_modes) {
  if (n_particles < 0)
    throw std::invalid_argument("particle count must be non-negative");
  if (n_modes < 1)
    throw std::invalid_argument("mode count must be positive");

  const std::uint64_t d = bosonic_dimension(
      static_cast<std::uint64_t>(n_particles),
      static_cast<std::uint64_t>(n_modes));
  dimension_ = static_cast<std::int64_t>(d);

  bits_per_site_ = std::max(
      1, static_cast<int>(std::bit_width(static_cast<std::uint64_t>(n_particles))));
  packable_ = static_cast<std::int64_t>(bits_per_site_) * n_modes <= 128;

  states_.reserve(static_cast<std::size_t>(d) *
                  static_cast<std::size_t>(n_modes));
  tilt_values_.reserve(static_cast<std::size_t>(d));
  if (packable_)
    packed_index_.reserve(static_cast<std::size_t>(d));
  else
    fallback_index_.reserve(static_cast<std::size_t>(d));

  const std::int64_t L = n_modes_;
  std::vector<std::int32_t> occ(static_cast<std::size_t>(L), 0);
  occ[0] = static_cast<std::int32_t>(n_particles);

  std::int64_t index = 0;
  for (;;) {
    states_.insert(states_.end(), occ.begin(), occ.end());
    double s = 0.0;
    for (std::int64_t i = 0; i < L; ++i)
      s += static_cast<double>(i + 1) * occ[static_cast<std::size_t>(i)];
    tilt_values_.push_back(s);
    if (packable_)
      packed_index_.emplace(pack(occ), index);
    else
      fallback_index_.emplace(occ, index);
    ++index;

    // Descending-lexicographic successor: decrement the rightmost
    // movable entry and flush everything to its right into the next
    // position.
    std::int64_t j = L - 2;
    while (j >= 0 && occ[static_cast<std::size_t>(j)] == 0) --j;
    if (j < 0) break;
    std::int32_t carried = 1;
    for (std::int64_t i = j + 1; i < L; ++i) {
      carried += occ[static_cast<std::size_t>(i)];
      occ[static_cast<std::size_t>(i)] = 0;
    }
    occ[static_cast<std::size_t>(j)] -= 1;
    occ[static_cast<std::size_t>(j + 1)] = carried;
  }

  if (index != dimension_)
    throw std::logic_error("basis enumeration does not match the binomial count");
}

bool FockBasis::contains(OccView occupation) const {
  if (static_cast<std::int64_t>(occupation.size()) != n_modes_) return false;
  for (std::int32_t v : occupation)
    if (v < 0 || v > n_particles_) return false;  // also keeps pack() in field
  if (packable_)
    return packed_index_.find(pack(occupation)) != packed_index_.end();
  std::vector<std::int32_t> key(occupation.begin(), occupation.end());
  return fallback_index_.find(key) != fallback_index_.end();
}

std::int64_t FockBasis::index_of(OccView occupation) const {
  if (static_cast<std::int64_t>(occupation.size()) != n_modes_)
    throw std::invalid_argument("occupation vector has wrong length");
  if (!contains(occupation))
    throw std::invalid_argument("occupation vector is not a basis member");
  if (packable_) return packed_index_.find(pack(occupation))->second;
  std::vector<std::int32_t> key(occupation.begin(), occupation.end());
  return fallback_index_.find(key)->second;
}

PairHopBlocks pair_hop_blocks(const FockBasis& basis, std::int32_t bond) {
  const std::int64_t L = basis.n_modes();
  const std::int64_t N = basis.n_particles();
  if (L < 2) throw std::invalid_argument("pair-hop blocks need at least 2 modes");
  if (bond < 1 || bond > L - 1)
    throw std::invalid_argument("bond index out of range: " + std::to_string(bond));

  const std::int64_t site = bond - 1;  // 0-based position of the left site
  const std::int64_t d = basis.dimension();

  // One scan collects, per pair occupancy r, the distinct "other modes"
  // configurations. Each column shows up exactly once among the states
  // with n_site = 0, so those rows suffice to enumerate columns.
  std::vector<std::vector<std::vector<std::int32_t>>> others_per_r(
      static_cast<std::size_t>(N) + 1);
  for (std::int64_t k = 0; k < d; ++k) {
    OccView occ = basis.state(k);
    if (occ[static_cast<std::size_t>(site)] != 0) continue;
    const std::int32_t r = occ[static_cast<std::size_t>(site + 1)];
    std::vector<std::int32_t> others;
    others.reserve(static_cast<std::size_t>(L - 2));
    for (std::int64_t i = 0; i < L; ++i) {
      if (i == site || i == site + 1) continue;
      others.push_back(occ[static_cast<std::size_t>(i)]);
    }
    others_per_r[static_cast<std::size_t>(r)].push_back(std::move(others));
  }

  PairHopBlocks result;
  result.bond = bond;
  result.basis_dimension = d;
  result.blocks.resize(static_cast<std::size_t>(N) + 1);

  std::vector<std::int32_t> full(static_cast<std::size_t>(L));
  for (std::int32_t r = 0; r <= N; ++r) {
    auto& columns = others_per_r[static_cast<std::size_t>(r)];
    std::sort(columns.begin(), columns.end());

    PairHopBlock& block = result.blocks[static_cast<std::size_t>(r)];
    block.pair_occupancy = r;
    block.n_columns = static_cast<std::int64_t>(columns.size());
    block.indices.resize(static_cast<std::size_t>((r + 1) * block.n_columns));

    for (std::int32_t s = 0; s <= r; ++s) {
      for (std::int64_t c = 0; c < block.n_columns; ++c) {
        const auto& others = columns[static_cast<std::size_t>(c)];
        std::int64_t o = 0;
        for (std::int64_t i = 0; i < L; ++i) {
          if (i == site)
            full[static_cast<std::size_t>(i)] = s;
          else if (i == site + 1)
            full[static_cast<std::size_t>(i)] = r - s;
          else
            full[static_cast<std::size_t>(i)] = others[static_cast<std::size_t>(o++)];
        }
        block.indices[static_cast<std::size_t>(s * block.n_columns + c)] =
            basis.index_of(full);
      }
    }
  }
  return result;
}

}  // namespace bhmc
