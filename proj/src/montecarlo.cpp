// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "bhmc/montecarlo.hpp"

#include <atomic>
#include <bit>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bhmc/qfi.hpp"
#include "bhmc/rng.hpp"
#include "bhmc/states.hpp"

namespace bhmc {

namespace {

// Stream-tag namespace: keeps trial, Haar-sample and scan-point streams
// of one master seed disjoint.
constexpr std::uint64_t kTagTrajectory = 1;
constexpr std::uint64_t kTagHaar = 2;
constexpr std::uint64_t kTagScanPoint = 3;

std::uint64_t time_bits(double t) { return std::bit_cast<std::uint64_t>(t); }

void fill_uniform(Eigen::MatrixXd& m, RngStream& rng, double lo, double hi) {
  // Row-major draw order, fixed as part of the reproducibility contract.
  for (Eigen::Index k = 0; k < m.rows(); ++k)
    for (Eigen::Index i = 0; i < m.cols(); ++i) m(k, i) = rng.uniform(lo, hi);
}

}  // namespace

void OptimizationConfig::validate() const {
  if (n_particles < 0)
    throw std::invalid_argument("particle count must be non-negative");
  if (n_modes < 1) throw std::invalid_argument("mode count must be positive");
  if (n_trials < 1) throw std::invalid_argument("trial count must be positive");
  if (n_steps < 1) throw std::invalid_argument("step count must be positive");
  if (total_time < 0.0)
    throw std::invalid_argument("preparation time must be non-negative");
  if (ranges.hop_min > ranges.hop_max ||
      ranges.detuning_min > ranges.detuning_max ||
      ranges.interaction_min > ranges.interaction_max)
    throw std::invalid_argument("control range is empty");
}

ControlTrajectory sample_trajectory(const OptimizationConfig& config,
                                    std::int64_t trial_index) {
  config.validate();
  if (trial_index < 0 || trial_index >= config.n_trials)
    throw std::invalid_argument("trial index out of range");

  RngStream rng = RngStream::derive(
      config.seed, {kTagTrajectory, static_cast<std::uint64_t>(trial_index)});

  ControlTrajectory traj;
  traj.total_time = config.total_time;
  traj.n_steps = config.n_steps;
  traj.dt = config.total_time / (3.0 * static_cast<double>(config.n_steps));
  traj.hop_strengths.resize(config.n_steps, config.n_modes - 1);
  traj.detunings.resize(config.n_steps, config.n_modes);
  traj.interactions.resize(config.n_steps, config.n_modes);
  fill_uniform(traj.hop_strengths, rng, config.ranges.hop_min,
               config.ranges.hop_max);
  fill_uniform(traj.detunings, rng, config.ranges.detuning_min,
               config.ranges.detuning_max);
  fill_uniform(traj.interactions, rng, config.ranges.interaction_min,
               config.ranges.interaction_max);
  return traj;
}

OptimizationResult optimize(const OptimizationConfig& config) {
  config.validate();

  auto basis =
      std::make_shared<const FockBasis>(config.n_particles, config.n_modes);
  const PropagationPlan plan = PropagationPlan::build(*basis);

  std::vector<std::int32_t> initial_occ(
      static_cast<std::size_t>(config.n_modes), 0);
  initial_occ[0] = static_cast<std::int32_t>(config.n_particles);
  const StateVector initial = fock_state(basis, initial_occ);

  const std::int64_t trials = config.n_trials;
  std::vector<double> scores(static_cast<std::size_t>(trials), 0.0);

  auto run_trial = [&](std::int64_t t) {
    const ControlTrajectory traj = sample_trajectory(config, t);
    const StateVector final_state = evolve(initial, traj, plan, config.parity);
    scores[static_cast<std::size_t>(t)] = qfi(final_state);
  };

  int workers = config.workers > 0 ? config.workers : default_worker_count();
  if (workers > trials) workers = static_cast<int>(trials);

  if (workers <= 1) {
    for (std::int64_t t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (;;) {
        const std::int64_t t = next.fetch_add(1);
        if (t >= trials) return;
        try {
          run_trial(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::int64_t best = 0;
  for (std::int64_t t = 1; t < trials; ++t)
    if (scores[static_cast<std::size_t>(t)] >
        scores[static_cast<std::size_t>(best)])
      best = t;  // strict comparison: ties keep the lowest index

  OptimizationResult result;
  result.best_qfi = scores[static_cast<std::size_t>(best)];
  result.best_trial_index = best;
  result.best_trajectory = sample_trajectory(config, best);
  result.all_qfi = std::move(scores);
  result.statistics = qfi_statistics(config.n_particles, config.n_modes);
  return result;
}

std::vector<double> sample_haar_qfi(std::int64_t n_particles,
                                    std::int64_t n_modes,
                                    std::int64_t n_samples,
                                    std::uint64_t seed) {
  if (n_samples < 1)
    throw std::invalid_argument("sample count must be positive");
  auto basis = std::make_shared<const FockBasis>(n_particles, n_modes);
  std::vector<double> values(static_cast<std::size_t>(n_samples));
  for (std::int64_t i = 0; i < n_samples; ++i) {
    RngStream rng =
        RngStream::derive(seed, {kTagHaar, static_cast<std::uint64_t>(i)});
    const StateVector psi = haar_random_state(basis, rng);
    values[static_cast<std::size_t>(i)] = qfi(psi);
  }
  return values;
}

TailDensityEstimate estimate_tail_density(std::int64_t n_particles,
                                          std::int64_t n_modes, double f0,
                                          std::int64_t n_samples,
                                          std::uint64_t seed) {
  const std::vector<double> values =
      sample_haar_qfi(n_particles, n_modes, n_samples, seed);
  std::int64_t above = 0;
  for (double f : values)
    if (f > f0) ++above;

  TailDensityEstimate estimate;
  estimate.n_samples = n_samples;
  estimate.fraction =
      static_cast<double>(above) / static_cast<double>(n_samples);
  estimate.std_error =
      std::sqrt(estimate.fraction * (1.0 - estimate.fraction) /
                static_cast<double>(n_samples));
  return estimate;
}

std::vector<ScanRow> scan_system_sizes(std::span<const std::int64_t> modes,
                                       std::span<const std::int64_t> particles,
                                       const OptimizationConfig& base) {
  std::vector<ScanRow> rows;
  rows.reserve(modes.size() * particles.size());
  for (std::int64_t l : modes) {
    for (std::int64_t n : particles) {
      ScanRow row;
      row.n_particles = n;
      row.n_modes = l;
      row.total_time = base.total_time;
      try {
        OptimizationConfig cfg = base;
        cfg.n_particles = n;
        cfg.n_modes = l;
        cfg.seed = derive_seed(base.seed,
                               {kTagScanPoint, static_cast<std::uint64_t>(n),
                                static_cast<std::uint64_t>(l),
                                time_bits(base.total_time)});
        const OptimizationResult res = optimize(cfg);
        row.ok = true;
        row.f_opt = res.best_qfi;
        row.mu = res.statistics.mean_exact;
        row.sigma = std::sqrt(res.statistics.variance_exact);
        row.sql = res.statistics.sql;
        row.hl = res.statistics.hl;
        row.delta_phi = delta_phi(res.best_qfi);
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<TimeScanRow> scan_evolution_time(std::int64_t n_particles,
                                             std::int64_t n_modes,
                                             std::span<const double> times,
                                             const OptimizationConfig& base) {
  std::vector<TimeScanRow> rows;
  rows.reserve(times.size());
  for (double t : times) {
    TimeScanRow row;
    row.total_time = t;
    try {
      OptimizationConfig cfg = base;
      cfg.n_particles = n_particles;
      cfg.n_modes = n_modes;
      cfg.total_time = t;
      cfg.seed = derive_seed(
          base.seed, {kTagScanPoint, static_cast<std::uint64_t>(n_particles),
                      static_cast<std::uint64_t>(n_modes), time_bits(t)});
      const OptimizationResult res = optimize(cfg);
      row.ok = true;
      row.f_opt = res.best_qfi;
      row.mu = res.statistics.mean_exact;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int default_worker_count() {
  if (const char* env = std::getenv("BHMC_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace bhmc
