// SPDX-License-Identifier: Apache-2.0
#include "slqp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "internal.hpp"
#include "slqp/hardness.hpp"
#include "slqp/percentile.hpp"
#include "slqp/solver.hpp"

namespace fs = std::filesystem;

namespace slqp {
namespace {

constexpr std::uint64_t kInitTag = 0x696e6974;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value, const std::string& key) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw std::invalid_argument("config key '" + key + "': empty list item");
    items.push_back(item);
  }
  if (items.empty()) throw std::invalid_argument("config key '" + key + "': empty list");
  return items;
}

double parse_number(const std::string& value, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
    throw std::invalid_argument("config key '" + key + "': expected a finite number, got '" +
                                value + "'");
  return v;
}

int parse_int(const std::string& value, const std::string& key) {
  const double v = parse_number(value, key);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + value +
                                "'");
  return static_cast<int>(v);
}

std::uint64_t parse_uint64(const std::string& value, const std::string& key) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || value.front() == '-')
    throw std::invalid_argument("config key '" + key + "': expected a non-negative integer, got '" +
                                value + "'");
  return v;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw std::invalid_argument("config key '" + key + "': expected a boolean, got '" + value + "'");
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "cells") cfg.network.cells = parse_int(value, key);
  else if (key == "users_per_cell") cfg.network.users_per_cell = parse_int(value, key);
  else if (key == "isd_m") cfg.network.isd_m = parse_number(value, key);
  else if (key == "d0_m") cfg.network.d0_m = parse_number(value, key);
  else if (key == "zeta") cfg.network.zeta = parse_number(value, key);
  else if (key == "noise_psd_dbm_hz") cfg.network.noise_psd_dbm_hz = parse_number(value, key);
  else if (key == "bandwidth_hz") cfg.network.bandwidth_hz = parse_number(value, key);
  else if (key == "pmax_dbm") cfg.network.pmax_dbm = parse_number(value, key);
  else if (key == "q") cfg.q = parse_number(value, key);
  else if (key == "realizations") cfg.realizations = parse_int(value, key);
  else if (key == "base_seed") cfg.base_seed = parse_uint64(value, key);
  else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "threads") cfg.threads = parse_int(value, key);
  else if (key == "measure_time") cfg.measure_time = parse_bool(value, key);
  else if (key == "max_outer") cfg.max_outer = parse_int(value, key);
  else if (key == "outer_tol") cfg.outer_tol = parse_number(value, key);
  else if (key == "algorithms") {
    cfg.algorithms.clear();
    for (const auto& item : split_list(value, key)) {
      try {
        cfg.algorithms.push_back(parse_algorithm(item));
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("config key 'algorithms': " + std::string(e.what()));
      }
    }
  } else if (key == "pmax_sweep_dbm") {
    cfg.pmax_sweep_dbm.clear();
    for (const auto& item : split_list(value, key))
      cfg.pmax_sweep_dbm.push_back(parse_number(item, key));
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

std::uint64_t instance_hash(const NetworkInstance& instance) {
  std::uint64_t h = detail::fnv1a64(&instance.user_count, sizeof instance.user_count);
  h = detail::fnv1a64(instance.gains.data(), instance.gains.size() * sizeof(double), h);
  h = detail::fnv1a64(&instance.noise_power, sizeof instance.noise_power, h);
  h = detail::fnv1a64(&instance.power_cap, sizeof instance.power_cap, h);
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double run_algorithm(const NetworkInstance& instance, int metric_kq, AlgorithmKind kind,
                     const OuterOptions& opts, const std::vector<double>& p0, int& outer_iters) {
  switch (kind) {
    case AlgorithmKind::qft: {
      const auto run = run_qft(instance, metric_kq, opts, p0);
      outer_iters = static_cast<int>(run.trace.rows.size());
      return run.result.value;
    }
    case AlgorithmKind::lft: {
      const auto run = run_lft(instance, metric_kq, opts, p0);
      outer_iters = static_cast<int>(run.trace.rows.size());
      return run.result.value;
    }
    case AlgorithmKind::sga: {
      const auto res = run_sga_baseline(instance, metric_kq, opts.inner, p0);
      outer_iters = res.iterations;
      return res.value;
    }
    case AlgorithmKind::cwsr: {
      const auto run = run_cwsr_baseline(instance, metric_kq, opts, p0);
      outer_iters = static_cast<int>(run.trace.rows.size());
      return run.result.value;
    }
    case AlgorithmKind::random_power:
      outer_iters = 0;
      return slqp_objective(instance, metric_kq, p0);
    case AlgorithmKind::sumrate: {
      // Optimize the plain sum rate, then score the result on the percentile metric.
      const auto run = run_qft(instance, instance.user_count, opts, p0);
      outer_iters = static_cast<int>(run.trace.rows.size());
      return slqp_objective(instance, metric_kq, run.result.p_star);
    }
  }
  throw std::logic_error("run_algorithm: unknown kind");
}

struct CellOutput {
  std::vector<ResultRow> rows;
  std::vector<std::string> log;
};

CellOutput run_seed_cells(const ExperimentConfig& config, const std::vector<double>& levels,
                          int seed_index) {
  CellOutput out;
  const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(seed_index);
  NetworkConfig ncfg = config.network;
  ncfg.seed = seed;
  const NetworkInstance channel = generate_cellular(ncfg);
  const int K = channel.user_count;
  const int metric_kq = percentile_number(K, config.q);

  // Unit initial draw, scaled per power level so all algorithms (and all
  // levels) of this seed start from the same relative point.
  std::vector<double> unit(K);
  detail::Rng rng(detail::mix_seed(seed, kInitTag));
  for (auto& v : unit) v = rng.uniform();

  OuterOptions opts;
  opts.max_outer = config.max_outer;
  opts.outer_tol = config.outer_tol;

  for (const double level : levels) {
    NetworkInstance instance = channel;
    instance.power_cap = dbm_to_watts(level);
    const std::string hash = hex16(instance_hash(instance));
    std::vector<double> p0(K);
    for (int k = 0; k < K; ++k) p0[k] = unit[k] * instance.power_cap;
    for (const AlgorithmKind kind : config.algorithms) {
      const std::string cell = "seed=" + std::to_string(seed) +
                               " pmax_dbm=" + detail::format_double(level) + " algorithm=" +
                               std::string(algorithm_name(kind));
      try {
        int outer_iters = 0;
        const auto t0 = std::chrono::steady_clock::now();
        const double value = run_algorithm(instance, metric_kq, kind, opts, p0, outer_iters);
        double wall_ms = 0.0;
        if (config.measure_time) {
          const auto t1 = std::chrono::steady_clock::now();
          wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
        out.rows.push_back({seed, kind, level, value, outer_iters, wall_ms});
        out.log.push_back(cell + " instance_hash=" + hash);
      } catch (const std::exception& e) {
        out.log.push_back("error " + cell + ": " + e.what());
      }
    }
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("plot: cannot open '" + path + "'");
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("plot: '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    table.rows.push_back(split_line(line));
  }
  return table;
}

std::size_t column_index(const Table& table, const std::string& name) {
  const auto it = std::find(table.header.begin(), table.header.end(), name);
  if (it == table.header.end())
    throw std::invalid_argument("plot: missing column '" + name + "'");
  return static_cast<std::size_t>(it - table.header.begin());
}

double numeric_cell(const std::vector<std::string>& row, std::size_t index) {
  if (index >= row.size()) throw std::invalid_argument("plot: short row in input CSV");
  char* end = nullptr;
  const double v = std::strtod(row[index].c_str(), &end);
  if (end == row[index].c_str() || *end != '\0')
    throw std::invalid_argument("plot: non-numeric cell '" + row[index] + "'");
  return v;
}

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Minimal static line chart; everything is explicit markup so the output is
// plain well-formed XML with no external references.
std::string render_svg(const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series) {
  const double width = 640, height = 400;
  const double left = 70, right = 616, top = 30, bottom = 352;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      }
      xmin = std::min(xmin, x), xmax = std::max(xmax, x);
      ymin = std::min(ymin, y), ymax = std::max(ymax, y);
    }
  if (first) throw std::invalid_argument("plot: no data points");
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + (ymin == 0 ? 1 : std::abs(ymin) * 0.1);
  const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
  const auto sy = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b"};

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << ' ' << height
      << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  const auto tick = [&](double v, bool on_x) {
    if (on_x)
      svg << "<text x=\"" << sx(v) << "\" y=\"" << bottom + 18
          << "\" font-size=\"12\" text-anchor=\"middle\">" << detail::format_double(v)
          << "</text>\n";
    else
      svg << "<text x=\"" << left - 6 << "\" y=\"" << sy(v) + 4
          << "\" font-size=\"12\" text-anchor=\"end\">" << detail::format_double(v)
          << "</text>\n";
  };
  tick(xmin, true), tick(xmax, true), tick(ymin, false), tick(ymax, false);
  svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << bottom + 38
      << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << (top + bottom) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (top + bottom) / 2 << ")\">" << y_label << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = palette[i % std::size(palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : series[i].points) svg << sx(x) << ',' << sy(y) << ' ';
    svg << "\"/>\n";
    const double ly = top + 6 + 16 * static_cast<double>(i);
    svg << "<line x1=\"" << right - 110 << "\" y1=\"" << ly << "\" x2=\"" << right - 90
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n"
        << "<text x=\"" << right - 84 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
        << series[i].name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> write_plot_files(const std::string& csv_path,
                                          const std::string& x_label,
                                          const std::string& y_label,
                                          const std::vector<Series>& series) {
  const fs::path base = fs::path(csv_path).parent_path() / fs::path(csv_path).stem();
  std::vector<std::string> written;
  for (const auto& s : series) {
    const std::string path = base.string() + "_" + s.name + ".dat";
    auto out = open_out(path);
    for (const auto& [x, y] : s.points)
      out << detail::format_double(x) << ' ' << detail::format_double(y) << '\n';
    written.push_back(path);
  }
  const std::string svg_path = base.string() + ".svg";
  open_out(svg_path) << render_svg(x_label, y_label, series);
  written.push_back(svg_path);
  return written;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (network.cells != 7)
    throw std::invalid_argument("cells: the layout is a fixed 7-cell cluster");
  if (network.users_per_cell < 1)
    throw std::invalid_argument("users_per_cell: need at least one user per cell");
  if (!(network.isd_m > 0)) throw std::invalid_argument("isd_m: must be positive");
  if (!(network.d0_m > 0)) throw std::invalid_argument("d0_m: must be positive");
  if (!(network.zeta > 0)) throw std::invalid_argument("zeta: must be positive");
  if (!(network.bandwidth_hz > 0)) throw std::invalid_argument("bandwidth_hz: must be positive");
  if (!(q > 0.0 && q <= 100.0)) throw std::invalid_argument("q: must lie in (0, 100]");
  if (algorithms.empty()) throw std::invalid_argument("algorithms: need at least one");
  if (realizations < 1) throw std::invalid_argument("realizations: need at least 1");
  if (threads < 0) throw std::invalid_argument("threads: must be non-negative");
  if (max_outer < 1) throw std::invalid_argument("max_outer: need at least 1");
  if (!(outer_tol > 0)) throw std::invalid_argument("outer_tol: must be positive");
  if (output_dir.empty()) throw std::invalid_argument("output_dir: must be non-empty");
  for (const double v : pmax_sweep_dbm)
    if (!std::isfinite(v)) throw std::invalid_argument("pmax_sweep_dbm: values must be finite");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    apply_key(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  return parse_config(in);
}

ExperimentResults run_experiment_rows(const ExperimentConfig& config) {
  config.validate();
  const std::vector<double> levels = config.pmax_sweep_dbm.empty()
                                         ? std::vector<double>{config.network.pmax_dbm}
                                         : config.pmax_sweep_dbm;
  const int n = config.realizations;
  std::vector<CellOutput> outputs(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
      outputs[static_cast<std::size_t>(i)] = run_seed_cells(config, levels, i);
  };
  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads - 1));
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  ExperimentResults results;
  for (const auto& cell : outputs) {
    results.rows.insert(results.rows.end(), cell.rows.begin(), cell.rows.end());
    results.log_lines.insert(results.log_lines.end(), cell.log.begin(), cell.log.end());
  }
  return results;
}

std::string run_experiment(const ExperimentConfig& config) {
  const ExperimentResults results = run_experiment_rows(config);
  fs::create_directories(config.output_dir);
  const std::string csv_path = (fs::path(config.output_dir) / "results.csv").string();
  auto csv = open_out(csv_path);
  csv << "seed,algorithm,pmax_dbm,final_slqp_nats,outer_iters,wall_ms\n";
  for (const ResultRow& row : results.rows)
    csv << row.seed << ',' << algorithm_name(row.algorithm) << ','
        << detail::format_double(row.pmax_dbm) << ','
        << detail::format_double(row.final_slqp_nats) << ',' << row.outer_iters << ','
        << detail::format_double(row.wall_ms) << '\n';
  auto log = open_out(fs::path(config.output_dir) / "results.log");
  for (const auto& line : results.log_lines) log << line << '\n';
  return csv_path;
}

std::string sweep_pmax(const ExperimentConfig& config) {
  if (config.pmax_sweep_dbm.empty())
    throw std::invalid_argument("sweep: pmax_sweep_dbm is required");
  const ExperimentResults results = run_experiment_rows(config);
  fs::create_directories(config.output_dir);
  const std::string sweep_path = (fs::path(config.output_dir) / "sweep.csv").string();
  auto out = open_out(sweep_path);
  out << "pmax_dbm,algorithm,mean_slqp_nats\n";
  for (const double level : config.pmax_sweep_dbm)
    for (const AlgorithmKind kind : config.algorithms) {
      double sum = 0.0;
      int count = 0;
      for (const ResultRow& row : results.rows)
        if (row.pmax_dbm == level && row.algorithm == kind) {
          sum += row.final_slqp_nats;
          ++count;
        }
      if (count > 0)
        out << detail::format_double(level) << ',' << algorithm_name(kind) << ','
            << detail::format_double(sum / count) << '\n';
    }
  return sweep_path;
}

std::vector<std::string> emit_plot_data(const std::string& csv_path, PlotKind kind) {
  const Table table = read_csv(csv_path);
  std::vector<Series> series;
  if (kind == PlotKind::convergence) {
    const std::size_t iter_col = column_index(table, "iter");
    const std::size_t obj_col = column_index(table, "objective_nats");
    Series s{"objective", {}};
    for (const auto& row : table.rows)
      s.points.emplace_back(numeric_cell(row, iter_col), numeric_cell(row, obj_col));
    series.push_back(std::move(s));
    return write_plot_files(csv_path, "outer iteration", "objective (nats)", series);
  }
  const std::size_t pmax_col = column_index(table, "pmax_dbm");
  const std::size_t algo_col = column_index(table, "algorithm");
  const std::size_t mean_col = column_index(table, "mean_slqp_nats");
  for (const auto& row : table.rows) {
    if (algo_col >= row.size()) throw std::invalid_argument("plot: short row in input CSV");
    const std::string& name = row[algo_col];
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.name == name; });
    if (it == series.end()) {
      series.push_back({name, {}});
      it = std::prev(series.end());
    }
    it->points.emplace_back(numeric_cell(row, pmax_col), numeric_cell(row, mean_col));
  }
  return write_plot_files(csv_path, "power cap (dBm)", "mean objective (nats)", series);
}

namespace {

void add_check(VerifyReport& report, const std::string& name, double residual, double bound) {
  const bool pass = residual <= bound;
  report.checks.push_back({name, residual, bound, pass});
  if (!pass) report.all_pass = false;
}

VerifyReport properties_suite() {
  VerifyReport report;
  detail::Rng rng(12345);
  double decomposition = 0, symmetry = 0, ordering = 0, permutation = 0, monotonic = 0,
         concavity = 0, supergradient = 0;
  for (const int K : {2, 5, 8, 16}) {
    for (int trial = 0; trial < 250; ++trial) {
      std::vector<double> x(K), y(K);
      for (auto& v : x) v = rng.uniform(-5.0, 5.0);
      for (auto& v : y) v = rng.uniform(-5.0, 5.0);
      const int kq = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(K));
      const double f = sum_smallest(x, kq);
      const double total = std::accumulate(x.begin(), x.end(), 0.0);
      if (kq < K)
        decomposition = std::max(decomposition,
                                 std::abs(f + sum_largest(x, K - kq) - total));
      else
        decomposition = std::max(decomposition, std::abs(f - total));
      std::vector<double> neg(K);
      for (int k = 0; k < K; ++k) neg[k] = -x[k];
      symmetry = std::max(symmetry, std::abs(sum_largest(x, kq) + sum_smallest(neg, kq)));
      ordering = std::max(ordering, f - sum_largest(x, kq));
      std::vector<double> perm = x;
      for (int k = K - 1; k > 0; --k)
        std::swap(perm[k], perm[rng.next() % static_cast<std::uint64_t>(k + 1)]);
      permutation = std::max(permutation, std::abs(sum_smallest(perm, kq) - f));
      std::vector<double> up = x;
      for (auto& v : up) v += rng.uniform();
      monotonic = std::max(monotonic, f - sum_smallest(up, kq));
      std::vector<double> mid(K);
      for (int k = 0; k < K; ++k) mid[k] = 0.5 * (x[k] + y[k]);
      concavity = std::max(concavity, 0.5 * (f + sum_smallest(y, kq)) - sum_smallest(mid, kq));
      const auto mask = sum_smallest_supergradient(x, kq);
      double linear = f;
      for (int k = 0; k < K; ++k) linear += mask.a[k] * (y[k] - x[k]);
      supergradient = std::max(supergradient, sum_smallest(y, kq) - linear);
    }
  }
  add_check(report, "decomposition: smallest + complement largest = total", decomposition, 1e-9);
  add_check(report, "symmetry: sum_largest(x) = -sum_smallest(-x)", symmetry, 1e-9);
  add_check(report, "ordering: sum_smallest <= sum_largest", ordering, 1e-9);
  add_check(report, "permutation invariance", permutation, 1e-9);
  add_check(report, "monotonicity under coordinate increase", monotonic, 1e-9);
  add_check(report, "midpoint concavity", concavity, 1e-9);
  add_check(report, "supergradient upper bound", supergradient, 1e-9);
  return report;
}

VerifyReport oracles_suite() {
  VerifyReport report;
  detail::Rng rng(777);
  double budget = 0, dominance = 0, idempotence = 0, full_match = 0, single_match = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 3 + static_cast<int>(rng.next() % 4);
    std::vector<double> z(K);
    for (auto& v : z) v = rng.uniform(0.1, 3.0);
    const double P = rng.uniform(0.5, 5.0);
    const auto p = water_fill(z, P);
    budget = std::max(budget,
                      std::abs(std::accumulate(p.begin(), p.end(), 0.0) - P));
    double wf_value = 0.0;
    for (int k = 0; k < K; ++k) wf_value += std::log1p(p[k] / z[k]);
    const auto set = FeasibleSet::simplex_cap(K, P);
    for (int sample = 0; sample < 200; ++sample) {
      std::vector<double> cand(K);
      for (auto& v : cand) v = rng.uniform(0.0, P);
      cand = project(set, cand);
      double value = 0.0;
      for (int k = 0; k < K; ++k) value += std::log1p(cand[k] / z[k]);
      dominance = std::max(dominance, value - wf_value);
      const auto again = project(set, cand);
      for (int k = 0; k < K; ++k)
        idempotence = std::max(idempotence, std::abs(again[k] - cand[k]));
    }

    const auto instance = make_parallel_instance(z, P);
    SolverOptions opts;
    opts.max_iters = 60000;
    opts.tol = 1e-11;
    const auto full = solve_parallel_slqp(instance, K, opts);
    full_match = std::max(full_match, std::abs(full.value - wf_value) /
                                          std::max(1.0, std::abs(wf_value)));
    const auto single = solve_parallel_slqp(instance, 1, opts);
    double pooled = 0.0;
    for (const double v : instance.noise) pooled += v;
    const double closed = std::log1p(P / pooled);
    single_match = std::max(single_match,
                            std::abs(single.value - closed) / std::max(1.0, std::abs(closed)));
  }
  add_check(report, "water-filling spends the whole budget", budget, 1e-9);
  add_check(report, "water-filling dominates sampled allocations", dominance, 1e-9);
  add_check(report, "capped-simplex projection is idempotent", idempotence, 1e-12);
  add_check(report, "full-percentile solve matches water-filling (relative)", full_match, 1e-3);
  add_check(report, "single-smallest solve matches pooled closed form (relative)", single_match,
            1e-3);
  return report;
}

VerifyReport hardness_suite() {
  VerifyReport report;
  const std::vector<ComponentGraph> graphs = {
      make_component_graph(3, 2, 3.0, {{2, 3}}),
      make_component_graph(5, 3, 4.0, {{3, 4}, {4, 5}, {3, 5}}),
      make_component_graph(6, 3, 4.0, {{4, 5}, {5, 6}}),
      make_component_graph(6, 4, 5.0, {{3, 4}, {3, 5}, {3, 6}}),
      make_component_graph(10, 5, 6.0, {{6, 7}, {7, 8}, {8, 9}, {9, 10}, {6, 10}}),
  };
  double formula = 0, independence = 0, isolated = 0;
  for (const auto& graph : graphs) {
    const auto instance = build_instance(graph);
    const auto [p, value] = brute_force_binary_optimum(instance, graph.kq);
    formula = std::max(formula, std::abs(value - expected_optimum(graph)));
    for (const auto& [a, b] : graph.edges)
      if (p[a - 1] != 0.0 && p[b - 1] != 0.0) independence = 1.0;
    for (int k = 0; k < graph.user_count - graph.kq; ++k)
      isolated = std::max(isolated, std::abs(p[k] - instance.power_cap));
  }
  add_check(report, "enumeration matches the independence-number formula", formula, 1e-9);
  add_check(report, "optimal on-set is independent inside the component", independence, 0.0);
  add_check(report, "isolated users transmit at full power", isolated, 0.0);
  return report;
}

VerifyReport diagnostics_suite() {
  VerifyReport report;
  detail::Rng rng(4242);
  double stationarity_qft = 0, stationarity_lft = 0, tangency = 0, identity = 0,
         minorization = 0;
  const double h = 1e-4;
  for (int trial = 0; trial < 5; ++trial) {
    const int K = 6;
    NetworkInstance instance;
    instance.user_count = K;
    instance.gains.assign(static_cast<std::size_t>(K) * K, 0.0);
    for (int j = 0; j < K; ++j)
      for (int k = 0; k < K; ++k)
        instance.gains[static_cast<std::size_t>(j) * K + k] =
            j == k ? rng.uniform(0.5, 2.0) : rng.uniform(0.0, 0.4);
    instance.noise_power = 1.0;
    instance.power_cap = 1.0;
    const int kq = 2;
    std::vector<double> init(K);
    for (auto& v : init) v = rng.uniform(0.1, 0.9);

    OuterOptions opts;
    for (const AlgorithmKind kind : {AlgorithmKind::qft, AlgorithmKind::lft}) {
      const auto run = kind == AlgorithmKind::qft ? run_qft(instance, kq, opts, init)
                                                  : run_lft(instance, kq, opts, init);
      const double slope =
          stationarity_check(instance, kq, run.result.p_star, 200, h, 99 + trial);
      (kind == AlgorithmKind::qft ? stationarity_qft : stationarity_lft) =
          std::max(kind == AlgorithmKind::qft ? stationarity_qft : stationarity_lft, slope);
      const auto touch =
          minorant_tangency_check(instance, kq, init, 100, h, kind, 7 + trial);
      tangency = std::max(tangency, touch.tangency_residual);
      identity = std::max(identity, touch.identity_gap);
      minorization = std::max(minorization, touch.minorization_violation);
    }
  }
  add_check(report, "finite-difference stationarity at qft output", stationarity_qft, 1e-2);
  add_check(report, "finite-difference stationarity at lft output", stationarity_lft, 1e-2);
  add_check(report, "tangent directional match at the expansion point", tangency, 10 * h);
  add_check(report, "surrogate equals objective at the expansion point", identity, 1e-11);
  add_check(report, "surrogate stays below the true rate", minorization, 1e-9);
  return report;
}

}  // namespace

VerifyReport verify_suite(const std::string& suite) {
  if (suite == "properties") return properties_suite();
  if (suite == "oracles") return oracles_suite();
  if (suite == "hardness") return hardness_suite();
  if (suite == "diagnostics") return diagnostics_suite();
  throw std::invalid_argument(
      "verify: unknown suite '" + suite +
      "' (expected properties, oracles, hardness, or diagnostics)");
}

}  // namespace slqp
