// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bhmc/moments.hpp"
#include "bhmc/propagation.hpp"

namespace bhmc {

/// Control sampling ranges. The defaults are the canonical ones: hop
/// strengths uniform in [0, 1], detunings and interactions uniform in
/// [-1, 1].
struct ControlRanges {
  double hop_min = 0.0;
  double hop_max = 1.0;
  double detuning_min = -1.0;
  double detuning_max = 1.0;
  double interaction_min = -1.0;
  double interaction_max = 1.0;
};

struct OptimizationConfig {
  std::int64_t n_particles = 0;
  std::int64_t n_modes = 0;
  double total_time = 20.0;  // units of inverse typical hopping rate
  // Trotter blocks per trajectory. Five blocks of dt = T/15 at the
  // default T keep the per-section hop angles large enough that the
  // sampled states reach the Haar-typical QFI scale by T ~ 10-20;
  // much finer slicing (n ~ 20+) measurably under-scrambles there.
  std::int64_t n_steps = 5;
  std::int64_t n_trials = 10;  // random trajectories to score
  std::uint64_t seed = 0;
  ControlRanges ranges;
  int workers = 0;  // 0 = default_worker_count()
  BondParityConvention parity = BondParityConvention::Standard;

  void validate() const;
};

struct OptimizationResult {
  double best_qfi = 0.0;
  std::int64_t best_trial_index = 0;
  ControlTrajectory best_trajectory;
  std::vector<double> all_qfi;  // indexed by trial
  QfiStatistics statistics;
};

/// The random trajectory of one trial. Fully determined by
/// (config.seed, trial_index): each trial draws from its own derived
/// stream, so trials are independent and any subset can be regenerated
/// without running the others. Draw order within a trial is the hop
/// matrix row-major, then detunings, then interactions.
ControlTrajectory sample_trajectory(const OptimizationConfig& config,
                                    std::int64_t trial_index);

/// Random-search optimization: evolve the all-in-first-site Fock state
/// through config.n_trials sampled trajectories, score each final state
/// by QFI, return the argmax (lowest trial index wins ties) together
/// with the full score list and the exact Haar statistics for (N, L).
/// Scores are gathered by trial index, so the result is bit-identical
/// for any worker count.
OptimizationResult optimize(const OptimizationConfig& config);

/// QFI values of n_samples Haar-random states; sample i is drawn from
/// the stream (seed, i), so prefixes are stable when the sample count
/// grows.
std::vector<double> sample_haar_qfi(std::int64_t n_particles,
                                    std::int64_t n_modes,
                                    std::int64_t n_samples,
                                    std::uint64_t seed);

struct TailDensityEstimate {
  double fraction = 0.0;   // share of samples with QFI > threshold
  double std_error = 0.0;  // binomial standard error
  std::int64_t n_samples = 0;
};

/// Monte-Carlo estimate of the Haar tail mass p(F0) = Pr(QFI > F0).
TailDensityEstimate estimate_tail_density(std::int64_t n_particles,
                                          std::int64_t n_modes, double f0,
                                          std::int64_t n_samples,
                                          std::uint64_t seed);

struct ScanRow {
  std::int64_t n_particles = 0;
  std::int64_t n_modes = 0;
  double total_time = 0.0;
  bool ok = false;
  std::string error;
  double f_opt = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  double sql = 0.0;
  double hl = 0.0;
  double delta_phi = 0.0;
};

/// One optimize() run per (L, N) grid point with seeds derived from
/// (base.seed, N, L, T); per-point failures are recorded in the row and
/// the scan continues.
std::vector<ScanRow> scan_system_sizes(std::span<const std::int64_t> modes,
                                       std::span<const std::int64_t> particles,
                                       const OptimizationConfig& base);

struct TimeScanRow {
  double total_time = 0.0;
  bool ok = false;
  std::string error;
  double f_opt = 0.0;
  double mu = 0.0;
};

/// optimize() at fixed (N, L) for each preparation time in `times`.
std::vector<TimeScanRow> scan_evolution_time(std::int64_t n_particles,
                                             std::int64_t n_modes,
                                             std::span<const double> times,
                                             const OptimizationConfig& base);

/// Worker-count default: the BHMC_WORKERS environment variable if set
/// to a positive integer, otherwise the hardware concurrency.
int default_worker_count();

}  // namespace bhmc
