// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "slqp/fractional.hpp"
#include "slqp/network.hpp"

namespace slqp {

// Monte-Carlo benchmark description.  Parsed from flat key=value text; every
// field has a default so an empty file is a valid config.
struct ExperimentConfig {
  NetworkConfig network;
  double q = 10.0;  // percentile defining the optimization target
  std::vector<AlgorithmKind> algorithms = {AlgorithmKind::qft, AlgorithmKind::lft,
                                           AlgorithmKind::sga, AlgorithmKind::cwsr,
                                           AlgorithmKind::random_power};
  int realizations = 50;
  std::uint64_t base_seed = 1;
  std::vector<double> pmax_sweep_dbm;  // empty: single level at network.pmax_dbm
  std::string output_dir = "results";
  int threads = 0;            // 0 picks the hardware concurrency
  bool measure_time = false;  // off keeps wall_ms at 0 so output bytes reproduce
  int max_outer = 100;
  double outer_tol = 1e-6;

  void validate() const;  // throws std::invalid_argument naming the field
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  std::uint64_t seed = 0;
  AlgorithmKind algorithm = AlgorithmKind::qft;
  double pmax_dbm = 0.0;
  double final_slqp_nats = 0.0;
  int outer_iters = 0;
  double wall_ms = 0.0;
};

// One benchmark cell is a (seed, power cap) pair; every configured algorithm
// consumes the identical channel instance and initial point within a cell.
struct ExperimentResults {
  std::vector<ResultRow> rows;        // seed-major, then power level, then algorithm
  std::vector<std::string> log_lines;  // per-row instance hashes and any cell errors
};

ExperimentResults run_experiment_rows(const ExperimentConfig& config);

// Runs the full grid and writes results.csv (plus results.log with per-row
// instance hashes) under output_dir.  Returns the CSV path.
std::string run_experiment(const ExperimentConfig& config);

// Mean final objective per (power level, algorithm); writes sweep.csv under
// output_dir and returns its path.  Requires a non-empty pmax_sweep_dbm.
std::string sweep_pmax(const ExperimentConfig& config);

enum class PlotKind { convergence, sweep };

// Reads a results CSV and writes two-column .dat series plus an SVG line chart
// next to it.  Returns the written paths.  convergence expects the per-iteration
// trace schema; sweep expects the mean-objective schema.
std::vector<std::string> emit_plot_data(const std::string& csv_path, PlotKind kind);

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass = true;
};

// suite is one of: properties, oracles, hardness, diagnostics.  Fixed seeds,
// so a report is reproducible run to run.
VerifyReport verify_suite(const std::string& suite);

}  // namespace slqp
