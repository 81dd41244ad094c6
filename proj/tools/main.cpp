// Copyright 2026 The bhmc Authors
// SPDX-License-Identifier: Apache-2.0
//
// bhmc: Monte-Carlo engineering of metrologically useful multi-mode
// bosonic states. Subcommands:
//   optimize   random-search a control sequence, report the best QFI
//   scan       optimize over an (N, L) grid, emit a flat table
//   time-scan  optimize at fixed (N, L) over preparation times
//   haar-stats exact vs sampled Haar statistics of the QFI
//   verify     self-check oracle suite

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bhmc/combinatorics.hpp"
#include "bhmc/dense_reference.hpp"
#include "bhmc/errors.hpp"
#include "bhmc/moments.hpp"
#include "bhmc/montecarlo.hpp"
#include "bhmc/qfi.hpp"
#include "bhmc/rng.hpp"
#include "bhmc/states.hpp"
#include "bhmc/version.hpp"

namespace {

using json = nlohmann::json;
using namespace bhmc;

constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitVerification = 4;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_output(const std::string& out_path, const std::string& payload) {
  if (out_path.empty() || out_path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file: " + out_path);
  file << payload;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    json row = json::array();
    for (Eigen::Index i = 0; i < m.cols(); ++i) row.push_back(m(k, i));
    rows.push_back(std::move(row));
  }
  return rows;
}

json config_to_json(const OptimizationConfig& cfg) {
  return json{
      {"particles", cfg.n_particles},
      {"modes", cfg.n_modes},
      {"time", cfg.total_time},
      {"steps", cfg.n_steps},
      {"trials", cfg.n_trials},
      {"seed", cfg.seed},
      {"workers", cfg.workers},
      {"ranges",
       {{"hop", {cfg.ranges.hop_min, cfg.ranges.hop_max}},
        {"detuning", {cfg.ranges.detuning_min, cfg.ranges.detuning_max}},
        {"interaction",
         {cfg.ranges.interaction_min, cfg.ranges.interaction_max}}}},
      {"bond_parity",
       cfg.parity == BondParityConvention::Standard ? "standard" : "swapped"},
      {"time_unit", "1/J"}};
}

json artifact_stamp() {
  return json{{"name", "bhmc"}, {"version", kVersion}};
}

// ---------------------------------------------------------------- optimize

int cmd_optimize(const OptimizationConfig& cfg, const std::string& out_path) {
  const auto t0 = std::chrono::steady_clock::now();
  const OptimizationResult res = optimize(cfg);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  json record{
      {"schema_version", kRecordSchemaVersion},
      {"artifact", artifact_stamp()},
      {"config", config_to_json(cfg)},
      {"results",
       {{"best_qfi", res.best_qfi},
        {"best_trial_index", res.best_trial_index},
        {"all_qfi", res.all_qfi},
        {"mu_exact", res.statistics.mean_exact},
        {"sigma_exact", std::sqrt(res.statistics.variance_exact)},
        {"sql", res.statistics.sql},
        {"hl", res.statistics.hl},
        {"delta_phi", delta_phi(res.best_qfi)},
        {"best_trajectory",
         {{"dt", res.best_trajectory.dt},
          {"hop_strengths", matrix_to_json(res.best_trajectory.hop_strengths)},
          {"detunings", matrix_to_json(res.best_trajectory.detunings)},
          {"interactions",
           matrix_to_json(res.best_trajectory.interactions)}}}}},
      {"timing", {{"wall_seconds", wall}}}};
  write_output(out_path, record.dump(2) + "\n");
  return 0;
}

// -------------------------------------------------------------------- scans

int cmd_scan(const std::vector<std::int64_t>& modes,
             const std::vector<std::int64_t>& particles,
             const OptimizationConfig& base, const std::string& out_path,
             const std::string& format) {
  const auto rows = scan_system_sizes(modes, particles, base);

  std::vector<std::string> failures;
  std::string payload;
  if (format == "csv") {
    std::ostringstream csv;
    csv << "N,L,F_opt,mu_exact,sigma_exact,sql,hl,delta_phi\n";
    for (const ScanRow& row : rows) {
      if (!row.ok) {
        failures.push_back("N=" + std::to_string(row.n_particles) +
                           " L=" + std::to_string(row.n_modes) + ": " +
                           row.error);
        continue;
      }
      csv << row.n_particles << ',' << row.n_modes << ','
          << format_double(row.f_opt) << ',' << format_double(row.mu) << ','
          << format_double(row.sigma) << ',' << format_double(row.sql) << ','
          << format_double(row.hl) << ',' << format_double(row.delta_phi)
          << '\n';
    }
    payload = csv.str();
  } else {
    json table = json::array();
    for (const ScanRow& row : rows) {
      if (!row.ok)
        failures.push_back("N=" + std::to_string(row.n_particles) +
                           " L=" + std::to_string(row.n_modes) + ": " +
                           row.error);
      table.push_back(json{{"N", row.n_particles},
                           {"L", row.n_modes},
                           {"ok", row.ok},
                           {"error", row.error},
                           {"F_opt", row.f_opt},
                           {"mu_exact", row.mu},
                           {"sigma_exact", row.sigma},
                           {"sql", row.sql},
                           {"hl", row.hl},
                           {"delta_phi", row.delta_phi}});
    }
    payload = table.dump(2) + "\n";
  }
  write_output(out_path, payload);

  if (!failures.empty()) {
    if (out_path.empty() || out_path == "-") {
      for (const auto& f : failures)
        std::cerr << "scan point failed: " << f << "\n";
    } else {
      std::ofstream sidecar(out_path + ".errors");
      for (const auto& f : failures) sidecar << f << "\n";
      std::cerr << failures.size() << " scan point(s) failed; see "
                << out_path << ".errors\n";
    }
    return kExitCapacity;
  }
  return 0;
}

int cmd_time_scan(std::int64_t n_particles, std::int64_t n_modes,
                  const std::vector<double>& times,
                  const OptimizationConfig& base, const std::string& out_path,
                  const std::string& format) {
  const auto rows = scan_evolution_time(n_particles, n_modes, times, base);

  std::vector<std::string> failures;
  std::string payload;
  if (format == "csv") {
    std::ostringstream csv;
    csv << "T,F_opt,mu_exact\n";
    for (const TimeScanRow& row : rows) {
      if (!row.ok) {
        failures.push_back("T=" + format_double(row.total_time) + ": " +
                           row.error);
        continue;
      }
      csv << format_double(row.total_time) << ',' << format_double(row.f_opt)
          << ',' << format_double(row.mu) << '\n';
    }
    payload = csv.str();
  } else {
    json table = json::array();
    for (const TimeScanRow& row : rows)
      table.push_back(json{{"T", row.total_time},
                           {"ok", row.ok},
                           {"error", row.error},
                           {"F_opt", row.f_opt},
                           {"mu_exact", row.mu}});
    payload = table.dump(2) + "\n";
  }
  write_output(out_path, payload);

  if (!failures.empty()) {
    for (const auto& f : failures)
      std::cerr << "scan point failed: " << f << "\n";
    return kExitCapacity;
  }
  return 0;
}

// --------------------------------------------------------------- haar-stats

int cmd_haar_stats(std::int64_t n_particles, std::int64_t n_modes,
                   std::int64_t n_samples, std::uint64_t seed,
                   const std::vector<double>& f0_list,
                   const std::string& out_path, const std::string& format) {
  const QfiStatistics stats = qfi_statistics(n_particles, n_modes);
  const double mu = stats.mean_exact;
  const double sigma = std::sqrt(stats.variance_exact);
  const BigRational mu_rat = qfi_mean_exact_rational(n_particles, n_modes);
  const BigRational var_braced =
      qfi_variance_exact_rational(n_particles, n_modes);
  const BigRational var_via_moments =
      qfi_second_moment_exact_rational(n_particles, n_modes) - mu_rat * mu_rat;

  const std::vector<double> samples =
      sample_haar_qfi(n_particles, n_modes, n_samples, seed);
  double mean = 0.0;
  for (double f : samples) mean += f;
  mean /= static_cast<double>(n_samples);
  double m2 = 0.0, m4 = 0.0;
  for (double f : samples) {
    const double c = f - mean;
    m2 += c * c;
    m4 += c * c * c * c;
  }
  m2 /= static_cast<double>(n_samples);
  m4 /= static_cast<double>(n_samples);
  const double mean_se = std::sqrt(m2 / static_cast<double>(n_samples));
  const double var_se =
      std::sqrt(std::max(m4 - m2 * m2, 0.0) / static_cast<double>(n_samples));

  std::int64_t tail_count = 0;
  const double tail_threshold = mu - sigma;
  for (double f : samples)
    if (f > tail_threshold) ++tail_count;
  const double tail =
      static_cast<double>(tail_count) / static_cast<double>(n_samples);
  const double tail_se =
      std::sqrt(tail * (1.0 - tail) / static_cast<double>(n_samples));

  json bounds = json::array();
  for (double f0 : f0_list) {
    std::int64_t above = 0;
    for (double f : samples)
      if (f > f0) ++above;
    const double emp =
        static_cast<double>(above) / static_cast<double>(n_samples);
    json entry{{"f0", f0}, {"empirical_tail", emp}};
    if (f0 >= mu)
      entry["cantelli_upper"] = cantelli_upper(f0, mu, sigma);
    else
      entry["cantelli_lower"] = cantelli_lower(f0, mu, sigma);
    bounds.push_back(std::move(entry));
  }

  if (format == "json") {
    json record{
        {"schema_version", kRecordSchemaVersion},
        {"artifact", artifact_stamp()},
        {"config",
         {{"particles", n_particles},
          {"modes", n_modes},
          {"samples", n_samples},
          {"seed", seed}}},
        {"exact",
         {{"dimension", stats.dimension},
          {"mu", mu},
          {"sigma", sigma},
          {"variance_braced", var_braced.convert_to<double>()},
          {"variance_via_moments", var_via_moments.convert_to<double>()},
          {"sql", stats.sql},
          {"hl", stats.hl}}},
        {"sampled",
         {{"mean", mean},
          {"mean_std_error", mean_se},
          {"variance", m2},
          {"variance_std_error", var_se},
          {"tail_above_mu_minus_sigma", tail},
          {"tail_std_error", tail_se}}},
        {"cantelli", bounds}};
    write_output(out_path, record.dump(2) + "\n");
    return 0;
  }

  std::ostringstream text;
  text << "Haar QFI statistics for N=" << n_particles << ", L=" << n_modes
       << " (d=" << stats.dimension << ")\n"
       << "  exact mean             " << format_double(mu) << "\n"
       << "  exact variance         " << format_double(stats.variance_exact)
       << "  (closed form)\n"
       << "  exact variance         "
       << format_double(var_via_moments.convert_to<double>())
       << "  (second-moment route)\n"
       << "  exact std deviation    " << format_double(sigma) << "\n"
       << "  sampled mean           " << format_double(mean) << " +/- "
       << format_double(mean_se) << "  (" << n_samples << " samples)\n"
       << "  sampled variance       " << format_double(m2) << " +/- "
       << format_double(var_se) << "\n"
       << "  tail mass > mu - sigma " << format_double(tail) << " +/- "
       << format_double(tail_se) << "  (Cantelli floor: 0.5)\n"
       << "  SQL " << format_double(stats.sql) << "   HL "
       << format_double(stats.hl) << "\n";
  for (const auto& entry : bounds) {
    text << "  F0=" << format_double(entry["f0"].get<double>())
         << "  empirical tail "
         << format_double(entry["empirical_tail"].get<double>());
    if (entry.contains("cantelli_upper"))
      text << "  <= Cantelli upper "
           << format_double(entry["cantelli_upper"].get<double>());
    else
      text << "  >= Cantelli lower "
           << format_double(entry["cantelli_lower"].get<double>());
    text << "\n";
  }
  write_output(out_path, text.str());
  return 0;
}

// ------------------------------------------------------------------- verify

struct VerifyCheck {
  std::string name;
  std::function<std::string()> run;  // empty result = pass, else detail
};

int cmd_verify(bool quick, const std::string& inject_fault) {
  std::vector<VerifyCheck> checks;

  checks.push_back({"dimension-basis", [quick]() -> std::string {
    if (bosonic_dimension(4, 4) != 35) return "d(4,4) != 35";
    const std::int64_t n_max = quick ? 8 : 20;
    const std::int64_t l_max = quick ? 4 : 6;
    for (std::int64_t l = 1; l <= l_max; ++l) {
      for (std::int64_t n = 0; n <= n_max; ++n) {
        FockBasis basis(n, l);
        if (basis.dimension() !=
            static_cast<std::int64_t>(bosonic_dimension(
                static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(l))))
          return "enumeration count mismatch at N=" + std::to_string(n) +
                 " L=" + std::to_string(l);
        for (std::int64_t k = 0; k < basis.dimension(); ++k)
          if (basis.index_of(basis.state(k)) != k)
            return "index round-trip failed";
      }
    }
    return {};
  }});

  checks.push_back({"block-partition", [inject_fault]() -> std::string {
    for (auto [n, l] : std::vector<std::pair<std::int64_t, std::int64_t>>{
             {4, 4}, {6, 3}, {3, 2}}) {
      FockBasis basis(n, l);
      for (std::int32_t bond = 1; bond <= l - 1; ++bond) {
        PairHopBlocks tables = pair_hop_blocks(basis, bond);
        if (inject_fault == "block-table" && bond == 1 && n == 4)
          tables.blocks[2].indices[0] = tables.blocks[2].indices.back();
        std::vector<int> hits(static_cast<std::size_t>(basis.dimension()), 0);
        for (const PairHopBlock& block : tables.blocks) {
          for (std::int64_t s = 0; s < block.rows(); ++s) {
            for (std::int64_t c = 0; c < block.n_columns; ++c) {
              const std::int64_t idx = block.at(s, c);
              ++hits[static_cast<std::size_t>(idx)];
              OccView occ = basis.state(idx);
              if (occ[static_cast<std::size_t>(bond - 1)] != s ||
                  occ[static_cast<std::size_t>(bond)] !=
                      block.pair_occupancy - s)
                return "row semantics violated at N=" + std::to_string(n) +
                       " L=" + std::to_string(l) +
                       " bond=" + std::to_string(bond);
            }
          }
        }
        for (int h : hits)
          if (h != 1)
            return "partition broken at N=" + std::to_string(n) +
                   " L=" + std::to_string(l) + " bond=" + std::to_string(bond);
      }
    }
    return {};
  }});

  checks.push_back({"sums-oracle", [quick]() -> std::string {
    const std::int64_t n_max = quick ? 8 : 20;
    const std::int64_t l_max = quick ? 4 : 6;
    for (std::int64_t l = 1; l <= l_max; ++l) {
      for (std::int64_t n = 0; n <= n_max; ++n) {
        FockBasis basis(n, l);
        for (int k = 1; k <= 4; ++k)
          if (tilt_power_sum(n, l, k) != brute_force_tilt_power_sum(basis, k))
            return "closed form disagrees with enumeration at N=" +
                   std::to_string(n) + " L=" + std::to_string(l) +
                   " k=" + std::to_string(k);
      }
    }
    return {};
  }});

  checks.push_back({"moments-routes", [quick]() -> std::string {
    if (qfi_mean_exact_rational(1, 2) != BigRational(2, 3))
      return "mu(1,2) != 2/3";
    if (qfi_variance_exact_rational(1, 2) != BigRational(4, 45))
      return "sigma^2(1,2) != 4/45";
    const std::int64_t n_top = quick ? 20 : 100;
    for (std::int64_t l = 1; l <= 10; ++l) {
      for (std::int64_t n : std::vector<std::int64_t>{1, 2, 5, 20, n_top}) {
        const BigRational mu = qfi_mean_exact_rational(n, l);
        const BigRational braced = qfi_variance_exact_rational(n, l);
        const BigRational via =
            qfi_second_moment_exact_rational(n, l) - mu * mu;
        if (braced != via)
          return "variance routes differ at N=" + std::to_string(n) +
                 " L=" + std::to_string(l);
      }
    }
    return {};
  }});

  checks.push_back({"ghz-heisenberg", [quick]() -> std::string {
    std::vector<std::pair<std::int64_t, std::int64_t>> grid{{4, 4}, {20, 10}};
    if (!quick) grid.emplace_back(200, 3);
    for (auto [n, l] : grid) {
      auto basis = std::make_shared<const FockBasis>(n, l);
      const double f = qfi(ghz_state(basis));
      const double hl = static_cast<double>(n) * static_cast<double>(n) *
                        static_cast<double>(l - 1) *
                        static_cast<double>(l - 1);
      if (std::abs(f - hl) > 1e-9 * hl)
        return "GHZ QFI off at N=" + std::to_string(n) +
               " L=" + std::to_string(l);
    }
    return {};
  }});

  checks.push_back({"propagator-dense", [quick]() -> std::string {
    std::vector<std::pair<std::int64_t, std::int64_t>> grid{{3, 3}};
    if (!quick) grid.emplace_back(4, 4);
    for (auto [n, l] : grid) {
      auto basis = std::make_shared<const FockBasis>(n, l);
      const PropagationPlan plan = PropagationPlan::build(*basis);
      OptimizationConfig cfg;
      cfg.n_particles = n;
      cfg.n_modes = l;
      cfg.total_time = 5.0;
      cfg.n_steps = 4;
      cfg.n_trials = 3;
      cfg.seed = 12345;
      std::vector<std::int32_t> occ(static_cast<std::size_t>(l), 0);
      occ[0] = static_cast<std::int32_t>(n);
      const StateVector initial = fock_state(basis, occ);
      for (std::int64_t trial = 0; trial < cfg.n_trials; ++trial) {
        const ControlTrajectory traj = sample_trajectory(cfg, trial);
        const StateVector fast = evolve(initial, traj, plan);
        const Eigen::VectorXcd dense =
            reference::evolve_dense(*basis, initial.amplitudes(), traj);
        const double err = (fast.amplitudes() - dense).cwiseAbs().maxCoeff();
        if (err > 1e-8)
          return "dense mismatch " + format_double(err) +
                 " at N=" + std::to_string(n) + " L=" + std::to_string(l);
      }
    }
    return {};
  }});

  checks.push_back({"norm-conservation", [quick]() -> std::string {
    const std::int64_t n = quick ? 60 : 200;
    auto basis = std::make_shared<const FockBasis>(n, 3);
    const PropagationPlan plan = PropagationPlan::build(*basis);
    OptimizationConfig cfg;
    cfg.n_particles = n;
    cfg.n_modes = 3;
    cfg.total_time = 20.0;
    cfg.n_steps = 20;
    cfg.n_trials = 1;
    cfg.seed = 777;
    std::vector<std::int32_t> occ{static_cast<std::int32_t>(n), 0, 0};
    const StateVector initial = fock_state(basis, occ);
    const StateVector out = evolve(initial, sample_trajectory(cfg, 0), plan);
    const double drift = std::abs(out.norm_squared() - 1.0);
    if (drift > 1e-9)
      return "norm drift " + format_double(drift) +
             " at N=" + std::to_string(n);
    return {};
  }});

  checks.push_back({"haar-sampling", [quick]() -> std::string {
    const std::int64_t samples = quick ? 2000 : 10000;
    const QfiStatistics stats = qfi_statistics(4, 3);
    const double sigma = std::sqrt(stats.variance_exact);
    const std::vector<double> values = sample_haar_qfi(4, 3, samples, 4242);
    double mean = 0.0;
    for (double f : values) mean += f;
    mean /= static_cast<double>(samples);
    const double se = sigma / std::sqrt(static_cast<double>(samples));
    if (std::abs(mean - stats.mean_exact) > 5.0 * se)
      return "sampled mean " + format_double(mean) + " vs exact " +
             format_double(stats.mean_exact);
    std::int64_t above = 0;
    for (double f : values)
      if (f > stats.mean_exact - sigma) ++above;
    const double tail =
        static_cast<double>(above) / static_cast<double>(samples);
    const double tail_se =
        std::sqrt(tail * (1.0 - tail) / static_cast<double>(samples));
    if (tail < 0.5 - 3.0 * tail_se)
      return "tail above mu - sigma is only " + format_double(tail);
    return {};
  }});

  bool all_ok = true;
  for (const VerifyCheck& check : checks) {
    std::string detail;
    try {
      detail = check.run();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (detail.empty()) {
      std::cout << "[ ok ] " << check.name << "\n";
    } else {
      std::cout << "[FAIL] " << check.name << ": " << detail << "\n";
      all_ok = false;
    }
  }
  std::cout << (all_ok ? "verification passed" : "verification FAILED")
            << "\n";
  return all_ok ? 0 : kExitVerification;
}

// ------------------------------------------------------------ list parsing

// Accepts "1,2,3" and "10:50:10" (inclusive range with step), mixed.
template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      values.push_back(static_cast<T>(std::stod(item)));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    const double lo = std::stod(item.substr(0, c1));
    const double hi =
        std::stod(item.substr(c1 + 1, c2 == std::string::npos
                                          ? std::string::npos
                                          : c2 - c1 - 1));
    const double step =
        c2 == std::string::npos ? 1.0 : std::stod(item.substr(c2 + 1));
    if (!(step > 0.0))
      throw CLI::ValidationError("range step must be positive");
    for (double v = lo; v <= hi + 1e-12; v += step)
      values.push_back(static_cast<T>(v));
  }
  if (values.empty()) throw CLI::ValidationError("empty list");
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo optimization of multi-mode bosonic state "
               "preparation for tilt sensing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "",
                 "read options from a TOML-style file ([subcommand] sections)");

  OptimizationConfig cfg;  // shared flag targets; defaults match the library

  auto add_system_flags = [&cfg](CLI::App* sub) {
    sub->add_option("-N,--particles", cfg.n_particles, "boson count")
        ->required()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("-L,--modes", cfg.n_modes, "lattice site count")
        ->required()
        ->check(CLI::PositiveNumber);
    sub->add_option("-T,--time", cfg.total_time,
                    "preparation time in units of 1/J")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("-n,--steps", cfg.n_steps, "Trotter blocks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("-v,--trials", cfg.n_trials, "random trajectories")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    sub->add_option("--workers", cfg.workers,
                    "worker threads (0 = auto, BHMC_WORKERS overrides)")
        ->check(CLI::Range(0, 4096))
        ->capture_default_str();
  };

  std::string out_path = "-";

  // optimize
  auto* opt = app.add_subcommand(
      "optimize", "random-search a control sequence, report the best QFI");
  std::string opt_format = "json";
  add_system_flags(opt);
  opt->add_option("--out", out_path, "output file (- for stdout)");
  opt->add_option("--format", opt_format, "output format")
      ->check(CLI::IsMember({"json"}));

  // scan
  auto* scan = app.add_subcommand(
      "scan", "optimize over an (N, L) grid and emit a flat table");
  std::string particles_list, modes_list = "3";
  std::string scan_format = "csv";
  scan->add_option("-N,--particles", particles_list,
                   "particle counts, e.g. 10,20,40 or 10:50:10")
      ->required();
  scan->add_option("-L,--modes", modes_list, "mode counts, e.g. 3,5")
      ->capture_default_str();
  scan->add_option("-T,--time", cfg.total_time, "preparation time")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  scan->add_option("-n,--steps", cfg.n_steps, "Trotter blocks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scan->add_option("-v,--trials", cfg.n_trials, "random trajectories")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scan->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  scan->add_option("--workers", cfg.workers, "worker threads (0 = auto)")
      ->check(CLI::Range(0, 4096));
  scan->add_option("--out", out_path, "output file (- for stdout)");
  scan->add_option("--format", scan_format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  // time-scan
  auto* tscan = app.add_subcommand(
      "time-scan", "optimize at fixed (N, L) over preparation times");
  std::string times_list;
  std::string tscan_format = "csv";
  add_system_flags(tscan);
  tscan->add_option("--times", times_list,
                    "preparation times, e.g. 0.5,1,2,5,10,20")
      ->required();
  tscan->add_option("--out", out_path, "output file (- for stdout)");
  tscan->add_option("--format", tscan_format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  // haar-stats
  auto* haar = app.add_subcommand(
      "haar-stats", "exact vs sampled Haar statistics of the QFI");
  std::int64_t n_samples = 10000;
  std::vector<double> f0_list;
  std::string haar_format = "text";
  haar->add_option("-N,--particles", cfg.n_particles, "boson count")
      ->required()
      ->check(CLI::NonNegativeNumber);
  haar->add_option("-L,--modes", cfg.n_modes, "lattice site count")
      ->required()
      ->check(CLI::PositiveNumber);
  haar->add_option("--samples", n_samples, "Haar samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  haar->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  haar->add_option("--f0", f0_list,
                   "thresholds for Cantelli bounds (repeatable)");
  haar->add_option("--out", out_path, "output file (- for stdout)");
  haar->add_option("--format", haar_format, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  // verify
  auto* verify = app.add_subcommand("verify", "self-check oracle suite");
  bool quick = false;
  std::string inject_fault;
  verify->add_flag("--quick", quick, "small-size subset, finishes in seconds");
  verify->add_option("--inject-fault", inject_fault,
                     "deliberately corrupt a structure (tests the checks)")
      ->check(CLI::IsMember({"block-table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (opt->parsed()) return cmd_optimize(cfg, out_path);
    if (scan->parsed())
      return cmd_scan(parse_list<std::int64_t>(modes_list),
                      parse_list<std::int64_t>(particles_list), cfg, out_path,
                      scan_format);
    if (tscan->parsed())
      return cmd_time_scan(cfg.n_particles, cfg.n_modes,
                           parse_list<double>(times_list), cfg, out_path,
                           tscan_format);
    if (haar->parsed())
      return cmd_haar_stats(cfg.n_particles, cfg.n_modes, n_samples, cfg.seed,
                            f0_list, out_path, haar_format);
    if (verify->parsed()) return cmd_verify(quick, inject_fault);
  } catch (const capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
