// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bhmc/montecarlo.hpp"
#include "bhmc/qfi.hpp"
#include "bhmc/states.hpp"

using namespace bhmc;

namespace {

OptimizationConfig small_config() {
  OptimizationConfig cfg;
  cfg.n_particles = 4;
  cfg.n_modes = 3;
  cfg.total_time = 8.0;
  cfg.n_steps = 6;
  cfg.n_trials = 5;
  cfg.seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("trajectory sampling") {
  const OptimizationConfig cfg = small_config();

  SUBCASE("shapes, ranges and time slicing") {
    const ControlTrajectory traj = sample_trajectory(cfg, 2);
    CHECK(traj.hop_strengths.rows() == cfg.n_steps);
    CHECK(traj.hop_strengths.cols() == cfg.n_modes - 1);
    CHECK(traj.detunings.rows() == cfg.n_steps);
    CHECK(traj.detunings.cols() == cfg.n_modes);
    CHECK(traj.interactions.cols() == cfg.n_modes);
    CHECK(traj.dt == cfg.total_time / (3.0 * static_cast<double>(cfg.n_steps)));
    CHECK(traj.hop_strengths.minCoeff() >= 0.0);
    CHECK(traj.hop_strengths.maxCoeff() <= 1.0);
    CHECK(traj.detunings.minCoeff() >= -1.0);
    CHECK(traj.detunings.maxCoeff() <= 1.0);
    CHECK_NOTHROW(traj.validate(cfg.n_modes));
  }

  SUBCASE("deterministic per (seed, trial), independent across trials") {
    const ControlTrajectory a = sample_trajectory(cfg, 3);
    const ControlTrajectory b = sample_trajectory(cfg, 3);
    CHECK(a.hop_strengths == b.hop_strengths);
    CHECK(a.detunings == b.detunings);
    CHECK(a.interactions == b.interactions);
    const ControlTrajectory c = sample_trajectory(cfg, 4);
    CHECK(a.hop_strengths != c.hop_strengths);
  }

  SUBCASE("uniform moments across many draws") {
    OptimizationConfig wide = small_config();
    wide.n_trials = 400;
    double sum_j = 0.0, sum_d = 0.0, sum_u = 0.0;
    std::int64_t count_j = 0, count_du = 0;
    for (std::int64_t t = 0; t < wide.n_trials; ++t) {
      const ControlTrajectory traj = sample_trajectory(wide, t);
      sum_j += traj.hop_strengths.sum();
      sum_d += traj.detunings.sum();
      sum_u += traj.interactions.sum();
      count_j += traj.hop_strengths.size();
      count_du += traj.detunings.size();
    }
    CHECK(sum_j / static_cast<double>(count_j) == doctest::Approx(0.5).epsilon(0.03));
    CHECK(std::abs(sum_d / static_cast<double>(count_du)) < 0.03);
    CHECK(std::abs(sum_u / static_cast<double>(count_du)) < 0.03);
  }

  SUBCASE("invalid requests") {
    CHECK_THROWS_AS(sample_trajectory(cfg, -1), std::invalid_argument);
    CHECK_THROWS_AS(sample_trajectory(cfg, cfg.n_trials), std::invalid_argument);
    OptimizationConfig bad = cfg;
    bad.n_trials = 0;
    CHECK_THROWS_AS(optimize(bad), std::invalid_argument);
  }
}

TEST_CASE("optimization") {
  SUBCASE("a single trial wins trivially") {
    OptimizationConfig cfg = small_config();
    cfg.n_trials = 1;
    const OptimizationResult res = optimize(cfg);
    CHECK(res.best_trial_index == 0);
    CHECK(res.all_qfi.size() == 1);
    CHECK(res.best_qfi == res.all_qfi[0]);
  }

  SUBCASE("zero preparation time scores zero everywhere") {
    OptimizationConfig cfg = small_config();
    cfg.total_time = 0.0;
    const OptimizationResult res = optimize(cfg);
    for (double f : res.all_qfi) CHECK(f == 0.0);
  }

  SUBCASE("best is the max, reproducible by re-evolving the trajectory") {
    const OptimizationConfig cfg = small_config();
    const OptimizationResult res = optimize(cfg);
    double best = 0.0;
    for (double f : res.all_qfi) best = std::max(best, f);
    CHECK(res.best_qfi == best);
    CHECK(res.all_qfi[static_cast<std::size_t>(res.best_trial_index)] ==
          res.best_qfi);

    auto basis = std::make_shared<const FockBasis>(cfg.n_particles, cfg.n_modes);
    std::vector<std::int32_t> occ(static_cast<std::size_t>(cfg.n_modes), 0);
    occ[0] = static_cast<std::int32_t>(cfg.n_particles);
    const StateVector replayed =
        evolve(fock_state(basis, occ), res.best_trajectory);
    CHECK(qfi(replayed) == res.best_qfi);
  }

  SUBCASE("scores stay below the Heisenberg ceiling") {
    const OptimizationConfig cfg = small_config();
    const OptimizationResult res = optimize(cfg);
    for (double f : res.all_qfi) CHECK(f <= res.statistics.hl + 1e-6);
  }

  SUBCASE("worker count does not change the scores") {
    OptimizationConfig cfg = small_config();
    cfg.n_trials = 8;
    cfg.workers = 1;
    const OptimizationResult serial = optimize(cfg);
    cfg.workers = 4;
    const OptimizationResult parallel = optimize(cfg);
    REQUIRE(serial.all_qfi.size() == parallel.all_qfi.size());
    for (std::size_t i = 0; i < serial.all_qfi.size(); ++i)
      CHECK(serial.all_qfi[i] == parallel.all_qfi[i]);  // bit-identical
    CHECK(serial.best_trial_index == parallel.best_trial_index);
  }
}

TEST_CASE("tail density estimation") {
  SUBCASE("degenerate thresholds") {
    const TailDensityEstimate at_zero = estimate_tail_density(3, 3, 0.0, 200, 7);
    CHECK(at_zero.fraction == doctest::Approx(1.0));
    const QfiStatistics stats = qfi_statistics(3, 3);
    const TailDensityEstimate above_hl =
        estimate_tail_density(3, 3, stats.hl + 1.0, 200, 7);
    CHECK(above_hl.fraction == 0.0);
  }
  SUBCASE("majority of states sit above mu - sigma") {
    const QfiStatistics stats = qfi_statistics(4, 3);
    const double f0 = stats.mean_exact - std::sqrt(stats.variance_exact);
    const TailDensityEstimate est = estimate_tail_density(4, 3, f0, 2000, 11);
    CHECK(est.fraction >= 0.5 - 3.0 * est.std_error);
  }
  SUBCASE("reproducible under a fixed seed") {
    const TailDensityEstimate a = estimate_tail_density(3, 3, 10.0, 500, 13);
    const TailDensityEstimate b = estimate_tail_density(3, 3, 10.0, 500, 13);
    CHECK(a.fraction == b.fraction);
  }
}

TEST_CASE("system-size scan") {
  OptimizationConfig base;
  base.total_time = 20.0;
  base.n_steps = 20;
  base.n_trials = 10;
  base.seed = 2024;

  SUBCASE("empty grid gives an empty table") {
    const std::vector<std::int64_t> none;
    const std::vector<std::int64_t> ns{10};
    CHECK(scan_system_sizes(none, ns, base).empty());
    CHECK(scan_system_sizes(ns, none, base).empty());
  }

  SUBCASE("rows beat the SQL and respect the ceiling at L=3") {
    const std::vector<std::int64_t> modes{3};
    const std::vector<std::int64_t> particles{10, 20, 40};
    const auto rows = scan_system_sizes(modes, particles, base);
    REQUIRE(rows.size() == 3);
    for (const ScanRow& row : rows) {
      REQUIRE(row.ok);
      CHECK(row.f_opt > row.sql);
      CHECK(row.f_opt <= row.hl);
      CHECK(row.delta_phi == doctest::Approx(1.0 / std::sqrt(row.f_opt)));
    }
  }

  SUBCASE("capacity failures are recorded without aborting the scan") {
    const std::vector<std::int64_t> modes{3};
    const std::vector<std::int64_t> particles{2, 40000000};
    OptimizationConfig light = base;
    light.n_trials = 1;
    light.n_steps = 2;
    const auto rows = scan_system_sizes(modes, particles, light);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].ok);
    CHECK_FALSE(rows[1].ok);
    CHECK_FALSE(rows[1].error.empty());
  }
}

TEST_CASE("evolution-time scan") {
  OptimizationConfig base;
  base.n_steps = 10;
  base.n_trials = 4;
  base.seed = 55;

  const std::vector<double> times{0.1, 2.0, 10.0};
  const auto rows = scan_evolution_time(6, 3, times, base);
  REQUIRE(rows.size() == 3);
  for (const TimeScanRow& row : rows) REQUIRE(row.ok);
  CHECK(rows[0].f_opt < rows[2].f_opt);  // short prep barely entangles
  CHECK(rows[0].mu == rows[2].mu);

  const auto again = scan_evolution_time(6, 3, times, base);
  for (std::size_t i = 0; i < rows.size(); ++i)
    CHECK(rows[i].f_opt == again[i].f_opt);
}
