// SPDX-License-Identifier: Apache-2.0
// Command-line front end: instance generation, single solves, benchmark
// sweeps, plot emission, and the self-check suites.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "internal.hpp"
#include "slqp/bench.hpp"
#include "slqp/fractional.hpp"
#include "slqp/hardness.hpp"
#include "slqp/network.hpp"
#include "slqp/percentile.hpp"

namespace {

constexpr std::uint64_t kInitTag = 0x696e6974;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

int run_generate(const slqp::NetworkConfig& config, const std::string& output) {
  const auto instance = slqp::generate_cellular(config);
  const std::string json = slqp::to_json(instance);
  if (output.empty()) {
    std::cout << json << '\n';
  } else {
    open_out(output) << json << '\n';
    std::cout << "wrote " << output << " (" << instance.user_count << " users)\n";
  }
  return 0;
}

int run_solve(const std::string& instance_path, double q, const std::string& algo,
              std::uint64_t seed, int max_outer, double tol, const std::string& trace_path,
              const std::string& powers_path) {
  const auto instance = slqp::instance_from_json(slurp(instance_path));
  const auto kind = slqp::parse_algorithm(algo);
  const int kq = slqp::percentile_number(instance.user_count, q);

  std::vector<double> init(static_cast<std::size_t>(instance.user_count));
  slqp::detail::Rng rng(slqp::detail::mix_seed(seed, kInitTag));
  for (auto& v : init) v = rng.uniform() * instance.power_cap;

  slqp::OuterOptions opts;
  opts.max_outer = max_outer;
  opts.outer_tol = tol;

  double value = 0.0;
  int iters = 0;
  bool converged = true;
  std::vector<double> powers;
  const slqp::OuterTrace* trace = nullptr;
  slqp::MmRun run;
  slqp::SolveResult direct;
  switch (kind) {
    case slqp::AlgorithmKind::qft:
    case slqp::AlgorithmKind::lft:
      run = kind == slqp::AlgorithmKind::qft ? slqp::run_qft(instance, kq, opts, init)
                                             : slqp::run_lft(instance, kq, opts, init);
      value = run.result.value;
      iters = static_cast<int>(run.trace.rows.size());
      converged = run.result.converged;
      powers = run.result.p_star;
      trace = &run.trace;
      break;
    case slqp::AlgorithmKind::cwsr:
      run = slqp::run_cwsr_baseline(instance, kq, opts, init);
      value = run.result.value;
      iters = static_cast<int>(run.trace.rows.size());
      converged = run.result.converged;
      powers = run.result.p_star;
      trace = &run.trace;
      break;
    case slqp::AlgorithmKind::sumrate:
      run = slqp::run_qft(instance, instance.user_count, opts, init);
      value = slqp::slqp_objective(instance, kq, run.result.p_star);
      iters = static_cast<int>(run.trace.rows.size());
      converged = run.result.converged;
      powers = run.result.p_star;
      trace = &run.trace;
      break;
    case slqp::AlgorithmKind::sga:
      direct = slqp::run_sga_baseline(instance, kq, opts.inner, init);
      value = direct.value;
      iters = direct.iterations;
      converged = direct.converged;
      powers = direct.p_star;
      break;
    case slqp::AlgorithmKind::random_power:
      value = slqp_objective(instance, kq, init);
      powers = init;
      break;
  }

  if (!trace_path.empty()) {
    if (trace == nullptr)
      throw std::invalid_argument("--trace needs an algorithm with outer iterations "
                                  "(qft, lft, cwsr, or sumrate)");
    auto out = open_out(trace_path);
    trace->write_csv(out);
  }
  if (!powers_path.empty()) {
    auto out = open_out(powers_path);
    for (const double p : powers) out << slqp::detail::format_double(p) << '\n';
  }

  std::cout << "algorithm=" << slqp::algorithm_name(kind) << " users=" << instance.user_count
            << " kq=" << kq << '\n'
            << "value_nats=" << slqp::detail::format_double(value) << '\n'
            << "outer_iters=" << iters << " converged=" << (converged ? 1 : 0) << '\n';
  return 0;
}

int run_verify(const std::string& suite) {
  const auto report = slqp::verify_suite(suite);
  for (const auto& check : report.checks)
    std::printf("%s  %-58s residual=%.3e bound=%.3e\n", check.pass ? "PASS" : "FAIL",
                check.name.c_str(), check.residual, check.bound);
  std::printf("%s: %zu checks, %s\n", suite.c_str(), report.checks.size(),
              report.all_pass ? "all passed" : "FAILURES present");
  return report.all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sum-least-percentile rate optimization toolkit"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Draw a cellular network instance as JSON");
  slqp::NetworkConfig netcfg;
  std::string gen_output;
  gen->add_option("--seed", netcfg.seed, "Channel/user-drop seed");
  gen->add_option("--users-per-cell", netcfg.users_per_cell, "Users per cell (7 cells)");
  gen->add_option("--isd-m", netcfg.isd_m, "Inter-site distance in meters");
  gen->add_option("--d0-m", netcfg.d0_m, "Path-loss reference distance in meters");
  gen->add_option("--zeta", netcfg.zeta, "Path-loss exponent");
  gen->add_option("--noise-psd-dbm-hz", netcfg.noise_psd_dbm_hz, "Noise PSD in dBm/Hz");
  gen->add_option("--bandwidth-hz", netcfg.bandwidth_hz, "Bandwidth in Hz");
  gen->add_option("--pmax-dbm", netcfg.pmax_dbm, "Per-user power cap in dBm");
  gen->add_option("-o,--output", gen_output, "Output path (default: stdout)");

  auto* solve = app.add_subcommand("solve", "Optimize one instance");
  std::string solve_instance, solve_algo = "qft", solve_trace, solve_powers;
  double solve_q = 10.0, solve_tol = 1e-6;
  std::uint64_t solve_seed = 1;
  int solve_max_outer = 100;
  solve->add_option("instance", solve_instance, "Instance JSON path")->required();
  solve->add_option("--q", solve_q, "Percentile in (0, 100]");
  solve->add_option("--algo", solve_algo, "qft|lft|sga|cwsr|random|sumrate");
  solve->add_option("--seed", solve_seed, "Seed for the initial power draw");
  solve->add_option("--max-outer", solve_max_outer, "Outer iteration cap");
  solve->add_option("--tol", solve_tol, "Relative outer stopping tolerance");
  solve->add_option("--trace", solve_trace, "Write the per-outer-iteration CSV here");
  solve->add_option("--powers", solve_powers, "Write the final power vector here");

  auto* bench = app.add_subcommand("bench", "Run the configured benchmark grid");
  std::string bench_config;
  bench->add_option("config", bench_config, "key=value config path")->required();

  auto* sweep = app.add_subcommand("sweep", "Mean objective per power level");
  std::string sweep_config;
  sweep->add_option("config", sweep_config, "key=value config path")->required();

  auto* plot = app.add_subcommand("plot", "Emit .dat series and an SVG chart from a CSV");
  std::string plot_csv, plot_kind;
  plot->add_option("csv", plot_csv, "Input CSV path")->required();
  plot->add_option("--kind", plot_kind, "convergence|sweep")->required();

  auto* verify = app.add_subcommand("verify", "Run a self-check suite");
  std::string verify_suite_name;
  verify->add_option("suite", verify_suite_name, "properties|oracles|hardness|diagnostics")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return run_generate(netcfg, gen_output);
    if (solve->parsed())
      return run_solve(solve_instance, solve_q, solve_algo, solve_seed, solve_max_outer,
                       solve_tol, solve_trace, solve_powers);
    if (bench->parsed()) {
      std::cout << slqp::run_experiment(slqp::load_config(bench_config)) << '\n';
      return 0;
    }
    if (sweep->parsed()) {
      std::cout << slqp::sweep_pmax(slqp::load_config(sweep_config)) << '\n';
      return 0;
    }
    if (plot->parsed()) {
      slqp::PlotKind kind;
      if (plot_kind == "convergence") kind = slqp::PlotKind::convergence;
      else if (plot_kind == "sweep") kind = slqp::PlotKind::sweep;
      else throw std::invalid_argument("--kind must be convergence or sweep");
      for (const auto& path : slqp::emit_plot_data(plot_csv, kind)) std::cout << path << '\n';
      return 0;
    }
    if (verify->parsed()) return run_verify(verify_suite_name);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
