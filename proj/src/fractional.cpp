// SPDX-License-Identifier: Apache-2.0
#include "slqp/fractional.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "slqp/percentile.hpp"

#include "internal.hpp"

namespace slqp {

std::string_view algorithm_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::qft: return "qft";
    case AlgorithmKind::lft: return "lft";
    case AlgorithmKind::sga: return "sga";
    case AlgorithmKind::cwsr: return "cwsr";
    case AlgorithmKind::random_power: return "random";
    case AlgorithmKind::sumrate: return "sumrate";
  }
  throw std::invalid_argument("algorithm_name: unknown kind");
}

AlgorithmKind parse_algorithm(std::string_view name) {
  for (AlgorithmKind kind : {AlgorithmKind::qft, AlgorithmKind::lft, AlgorithmKind::sga,
                             AlgorithmKind::cwsr, AlgorithmKind::random_power,
                             AlgorithmKind::sumrate})
    if (name == algorithm_name(kind)) return kind;
  throw std::invalid_argument("parse_algorithm: expected one of qft, lft, sga, cwsr, random, sumrate");
}

double qft_aux_rate(double x, double signal, double interference) {
  const double arg = 1.0 + 2.0 * x * std::sqrt(signal) - x * x * interference;
  if (!(arg > 0.0)) throw std::domain_error("qft_aux_rate: log argument must be positive");
  return std::log(arg);
}

double lft_aux_rate(double x, double signal, double interference) {
  if (!(x > 0.0)) throw std::domain_error("lft_aux_rate: multiplier must be positive");
  return -x * interference + std::log(x * (signal + interference)) + 1.0;
}

namespace {

void link_powers(const NetworkInstance& instance, std::span<const double> p,
                 std::vector<double>& signal, std::vector<double>& interference) {
  const int K = instance.user_count;
  signal.resize(K);
  interference.resize(K);
  for (int k = 0; k < K; ++k) {
    double acc = instance.noise_power;
    for (int j = 0; j < K; ++j)
      if (j != k) acc += p[j] * instance.gain(j, k);
    signal[k] = std::max(0.0, p[k]) * instance.gain(k, k);
    interference[k] = acc;
  }
}

void check_run_inputs(const NetworkInstance& instance, int kq, std::span<const double> init) {
  instance.validate();
  if (kq < 1 || kq > instance.user_count)
    throw std::invalid_argument("run: kq must lie in [1, user_count]");
  if (init.size() != static_cast<std::size_t>(instance.user_count))
    throw std::invalid_argument("run: init vector length mismatch");
}

enum class Transform { qft, lft };

std::vector<double> transform_x_update(Transform t, const NetworkInstance& instance,
                                       std::span<const double> p) {
  std::vector<double> signal, interference;
  link_powers(instance, p, signal, interference);
  std::vector<double> x(instance.user_count);
  for (int k = 0; k < instance.user_count; ++k)
    x[k] = t == Transform::qft ? std::sqrt(signal[k]) / interference[k] : 1.0 / interference[k];
  return x;
}

// Surrogate rates for fixed multipliers; false when a quadratic-transform
// log argument leaves the domain.
bool surrogate_rates(Transform t, const NetworkInstance& instance, std::span<const double> x,
                     std::span<const double> p, std::vector<double>& out) {
  const int K = instance.user_count;
  std::vector<double> signal, interference;
  link_powers(instance, p, signal, interference);
  out.resize(K);
  for (int k = 0; k < K; ++k) {
    if (t == Transform::qft) {
      const double u = 2.0 * x[k] * std::sqrt(signal[k]) - x[k] * x[k] * interference[k];
      if (!(u > -1.0)) return false;
      out[k] = std::log1p(u);
    } else {
      out[k] = -x[k] * interference[k] +
               std::log(x[k] * (signal[k] + interference[k])) + 1.0;
    }
  }
  return true;
}

// Inner oracle: percentile objective of the surrogate rates, with a
// supergradient assembled over the selected users.
ConcaveOracle make_surrogate_oracle(Transform t, const NetworkInstance& instance, int kq,
                                    std::vector<double> x) {
  const int K = instance.user_count;
  const double p_floor = 1e-12 * instance.power_cap;
  return [t, &instance, kq, x = std::move(x), K, p_floor](std::span<const double> p) {
    ObjectiveEval ev;
    std::vector<double> signal, interference, aux(K), arg(K);
    link_powers(instance, p, signal, interference);
    for (int k = 0; k < K; ++k) {
      if (t == Transform::qft) {
        const double u = 2.0 * x[k] * std::sqrt(signal[k]) - x[k] * x[k] * interference[k];
        if (!(u > -1.0)) {
          ev.in_domain = false;
          return ev;
        }
        aux[k] = std::log1p(u);
        arg[k] = 1.0 + u;
      } else {
        aux[k] = -x[k] * interference[k] +
                 std::log(x[k] * (signal[k] + interference[k])) + 1.0;
      }
    }
    const auto mask = sum_smallest_supergradient(aux, kq);
    ev.value = 0.0;
    ev.supergradient.assign(K, 0.0);
    for (int k = 0; k < K; ++k) {
      if (!mask.a[k]) continue;
      ev.value += aux[k];
      if (t == Transform::qft) {
        const double s = arg[k];  // 1 + u_k
        if (x[k] > 0.0) {
          // d sqrt(A)/dp_k, kept finite near p_k = 0.
          const double sqrt_a =
              std::sqrt(std::max(signal[k], instance.gain(k, k) * p_floor));
          ev.supergradient[k] += x[k] * instance.gain(k, k) / (sqrt_a * s);
          const double x2s = x[k] * x[k] / s;
          for (int j = 0; j < K; ++j)
            if (j != k) ev.supergradient[j] -= x2s * instance.gain(j, k);
        }
      } else {
        const double total = signal[k] + interference[k];
        for (int j = 0; j < K; ++j) {
          const double g = instance.gain(j, k);
          ev.supergradient[j] += g / total - (j != k ? x[k] * g : 0.0);
        }
      }
    }
    return ev;
  };
}

MmRun run_transform(Transform t, const NetworkInstance& instance, int kq,
                    const OuterOptions& opts, std::span<const double> init,
                    const FeasibleSet* feasible) {
  check_run_inputs(instance, kq, init);
  if (opts.max_outer < 1) throw std::invalid_argument("run: max_outer must be positive");
  const FeasibleSet set = feasible
                              ? *feasible
                              : FeasibleSet::uniform_box(instance.user_count, 0.0,
                                                         instance.power_cap);

  MmRun run;
  std::vector<double> p = project(set, init);
  double objective = slqp_objective(instance, kq, p);
  run.trace.initial_objective = objective;
  run.result.p_star = p;
  run.result.value = objective;

  std::vector<double> surrogate;
  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    const auto tic = std::chrono::steady_clock::now();
    auto x = transform_x_update(t, instance, p);
    if (!surrogate_rates(t, instance, x, p, surrogate))
      throw std::logic_error("run: surrogate left its domain at the expansion point");
    const double aux_at_p = sum_smallest(surrogate, kq);

    const auto inner =
        maximize_concave(make_surrogate_oracle(t, instance, kq, std::move(x)), set,
                         opts.inner, p);
    p = inner.p_star;
    const double next = slqp_objective(instance, kq, p);
    const auto toc = std::chrono::steady_clock::now();

    run.trace.rows.push_back(
        {outer, next, aux_at_p, inner.iterations,
         std::chrono::duration<double, std::milli>(toc - tic).count()});
    run.trace.inner_converged_all = run.trace.inner_converged_all && inner.converged;

    if (next > run.result.value) {
      run.result.value = next;
      run.result.p_star = p;
    }
    run.result.trace.push_back(run.result.value);
    run.result.iterations = outer;

    const double gain = next - objective;
    objective = next;
    if (gain < opts.outer_tol * std::max(1.0, std::abs(objective))) {
      run.result.converged = true;
      break;
    }
  }
  return run;
}

}  // namespace

void OuterTrace::write_csv(std::ostream& out) const {
  out << "iter,objective_nats,aux_objective_nats,inner_iters,time_ms\n";
  for (const auto& row : rows)
    out << row.iter << ',' << detail::format_double(row.objective_nats) << ','
        << detail::format_double(row.aux_objective_nats) << ',' << row.inner_iters << ','
        << detail::format_double(row.time_ms) << '\n';
}

double slqp_objective(const NetworkInstance& instance, int kq, std::span<const double> p) {
  return sum_smallest(rates(instance, p), kq);
}

std::vector<double> qft_x_update(const NetworkInstance& instance, std::span<const double> p) {
  return transform_x_update(Transform::qft, instance, p);
}

std::vector<double> lft_x_update(const NetworkInstance& instance, std::span<const double> p) {
  return transform_x_update(Transform::lft, instance, p);
}

MmRun run_qft(const NetworkInstance& instance, int kq, const OuterOptions& opts,
              std::span<const double> init, const FeasibleSet* feasible) {
  return run_transform(Transform::qft, instance, kq, opts, init, feasible);
}

MmRun run_lft(const NetworkInstance& instance, int kq, const OuterOptions& opts,
              std::span<const double> init, const FeasibleSet* feasible) {
  return run_transform(Transform::lft, instance, kq, opts, init, feasible);
}

SolveResult solve_parallel_slqp(const ParallelChannelInstance& instance, int kq,
                                const SolverOptions& opts) {
  const int K = static_cast<int>(instance.noise.size());
  if (kq < 1 || kq > K)
    throw std::invalid_argument("solve_parallel_slqp: kq must lie in [1, channel count]");
  const auto set = FeasibleSet::simplex_cap(K, instance.power_budget);
  const ConcaveOracle oracle = [&instance, kq, K](std::span<const double> p) {
    ObjectiveEval ev;
    std::vector<double> r(K);
    for (int k = 0; k < K; ++k) r[k] = std::log1p(std::max(0.0, p[k]) / instance.noise[k]);
    const auto mask = sum_smallest_supergradient(r, kq);
    ev.supergradient.assign(K, 0.0);
    for (int k = 0; k < K; ++k) {
      if (!mask.a[k]) continue;
      ev.value += r[k];
      ev.supergradient[k] = 1.0 / (instance.noise[k] + std::max(0.0, p[k]));
    }
    return ev;
  };
  const std::vector<double> init(K, instance.power_budget / K);
  return maximize_concave(oracle, set, opts, init);
}

SolveResult solve_parallel_lqp(const ParallelChannelInstance& instance, int kq) {
  const int K = static_cast<int>(instance.noise.size());
  if (kq < 1 || kq > K)
    throw std::invalid_argument("solve_parallel_lqp: kq must lie in [1, channel count]");

  // The kq-1 noisiest channels get nothing; the rest share one rate.
  double quiet_noise = 0.0;
  for (int k = kq - 1; k < K; ++k) quiet_noise += instance.noise[k];
  const double growth = instance.power_budget / quiet_noise;  // e^r - 1

  SolveResult res;
  res.p_star.assign(K, 0.0);
  for (int k = kq - 1; k < K; ++k) res.p_star[k] = instance.noise[k] * growth;
  res.value = std::log1p(growth);
  res.iterations = 0;
  res.converged = true;
  res.trace = {res.value};
  return res;
}

SolveResult run_sga_baseline(const NetworkInstance& instance, int kq, const SolverOptions& opts,
                             std::span<const double> init) {
  check_run_inputs(instance, kq, init);
  const int K = instance.user_count;
  const auto set = FeasibleSet::uniform_box(K, 0.0, instance.power_cap);
  const ConcaveOracle oracle = [&instance, kq, K](std::span<const double> p) {
    ObjectiveEval ev;
    std::vector<double> signal, interference, r(K);
    link_powers(instance, p, signal, interference);
    for (int k = 0; k < K; ++k) r[k] = std::log1p(signal[k] / interference[k]);
    const auto mask = sum_smallest_supergradient(r, kq);
    ev.supergradient.assign(K, 0.0);
    for (int k = 0; k < K; ++k) {
      if (!mask.a[k]) continue;
      ev.value += r[k];
      const double total = signal[k] + interference[k];
      for (int j = 0; j < K; ++j) {
        const double g = instance.gain(j, k);
        ev.supergradient[j] += g / total - (j != k ? g / interference[k] : 0.0);
      }
    }
    return ev;
  };
  return maximize_concave(oracle, set, opts, init);
}

MmRun run_cwsr_baseline(const NetworkInstance& instance, int metric_kq, const OuterOptions& opts,
                        std::span<const double> init) {
  check_run_inputs(instance, metric_kq, init);
  if (opts.max_outer < 1) throw std::invalid_argument("run: max_outer must be positive");
  const int K = instance.user_count;
  const auto set = FeasibleSet::uniform_box(K, 0.0, instance.power_cap);

  // Inverse-direct-gain weights, normalized for conditioning.
  std::vector<double> w(K);
  double w_max = 0.0;
  for (int k = 0; k < K; ++k) {
    w[k] = 1.0 / instance.gain(k, k);
    w_max = std::max(w_max, w[k]);
  }
  for (double& v : w) v /= w_max;

  const auto weighted_sum_rate = [&](std::span<const double> p) {
    const auto r = rates(instance, p);
    return detail::dot(w, r);
  };
  const double p_floor = 1e-12 * instance.power_cap;
  const auto make_oracle = [&](std::vector<double> x) -> ConcaveOracle {
    return [&instance, &w, x = std::move(x), K, p_floor](std::span<const double> p) {
      ObjectiveEval ev;
      std::vector<double> signal, interference;
      link_powers(instance, p, signal, interference);
      ev.supergradient.assign(K, 0.0);
      for (int k = 0; k < K; ++k) {
        const double u = 2.0 * x[k] * std::sqrt(signal[k]) - x[k] * x[k] * interference[k];
        if (!(u > -1.0)) {
          ev.in_domain = false;
          return ev;
        }
        ev.value += w[k] * std::log1p(u);
        if (x[k] > 0.0) {
          const double s = 1.0 + u;
          const double sqrt_a =
              std::sqrt(std::max(signal[k], instance.gain(k, k) * p_floor));
          ev.supergradient[k] += w[k] * x[k] * instance.gain(k, k) / (sqrt_a * s);
          const double x2s = w[k] * x[k] * x[k] / s;
          for (int j = 0; j < K; ++j)
            if (j != k) ev.supergradient[j] -= x2s * instance.gain(j, k);
        }
      }
      return ev;
    };
  };

  MmRun run;
  std::vector<double> p = project(set, init);
  double wsr = weighted_sum_rate(p);
  run.trace.initial_objective = slqp_objective(instance, metric_kq, p);
  double best_wsr = wsr;
  run.result.p_star = p;

  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    const auto tic = std::chrono::steady_clock::now();
    auto x = qft_x_update(instance, p);
    const auto inner = maximize_concave(make_oracle(std::move(x)), set, opts.inner, p);
    p = inner.p_star;
    const double next = weighted_sum_rate(p);
    const auto toc = std::chrono::steady_clock::now();

    // The trace reports the percentile metric; its own objective is the
    // weighted sum, carried in the aux column.
    run.trace.rows.push_back({outer, slqp_objective(instance, metric_kq, p), next,
                              inner.iterations,
                              std::chrono::duration<double, std::milli>(toc - tic).count()});
    run.trace.inner_converged_all = run.trace.inner_converged_all && inner.converged;

    best_wsr = std::max(best_wsr, next);
    run.result.trace.push_back(best_wsr);
    run.result.iterations = outer;
    run.result.p_star = p;

    const double gain = next - wsr;
    wsr = next;
    if (gain < opts.outer_tol * std::max(1.0, std::abs(wsr))) {
      run.result.converged = true;
      break;
    }
  }
  run.result.value = slqp_objective(instance, metric_kq, run.result.p_star);
  return run;
}

double stationarity_check(const NetworkInstance& instance, int kq, std::span<const double> p,
                          int num_directions, double h, std::uint64_t seed) {
  check_run_inputs(instance, kq, p);
  if (num_directions < 1) throw std::invalid_argument("stationarity_check: need directions");
  if (!(h > 0.0)) throw std::invalid_argument("stationarity_check: h must be positive");
  const int K = instance.user_count;
  const auto set = FeasibleSet::uniform_box(K, 0.0, instance.power_cap);
  const double f0 = slqp_objective(instance, kq, p);

  detail::Rng rng(detail::mix_seed(seed, 0x5741u));
  std::vector<double> d(K), y(K);
  double worst = -1e300;
  for (int i = 0; i < num_directions; ++i) {
    for (auto& v : d) v = rng.normal();
    const double n = detail::norm2(d);
    if (!(n > 0.0)) continue;
    for (int k = 0; k < K; ++k) y[k] = p[k] + h * d[k] / n;
    y = project(set, y);
    worst = std::max(worst, (slqp_objective(instance, kq, y) - f0) / h);
  }
  return worst;
}

TangencyReport minorant_tangency_check(const NetworkInstance& instance, int kq,
                                       std::span<const double> p, int num_directions, double h,
                                       AlgorithmKind transform, std::uint64_t seed) {
  check_run_inputs(instance, kq, p);
  if (num_directions < 1) throw std::invalid_argument("tangency_check: need directions");
  if (!(h > 0.0)) throw std::invalid_argument("tangency_check: h must be positive");
  Transform t;
  if (transform == AlgorithmKind::qft)
    t = Transform::qft;
  else if (transform == AlgorithmKind::lft)
    t = Transform::lft;
  else
    throw std::invalid_argument("tangency_check: transform must be qft or lft");

  const int K = instance.user_count;
  const auto set = FeasibleSet::uniform_box(K, 0.0, instance.power_cap);
  const auto x = transform_x_update(t, instance, p);

  std::vector<double> surrogate;
  if (!surrogate_rates(t, instance, x, p, surrogate))
    throw std::logic_error("tangency_check: surrogate undefined at the expansion point");
  const double aux0 = sum_smallest(surrogate, kq);
  const double f0 = slqp_objective(instance, kq, p);

  TangencyReport report;
  report.identity_gap = std::abs(aux0 - f0);

  detail::Rng rng(detail::mix_seed(seed, 0x7461u));
  std::vector<double> d(K), y(K);
  for (int i = 0; i < num_directions; ++i) {
    for (auto& v : d) v = rng.normal();
    const double n = detail::norm2(d);
    if (!(n > 0.0)) continue;
    for (int k = 0; k < K; ++k) y[k] = p[k] + h * d[k] / n;
    y = project(set, y);
    if (!surrogate_rates(t, instance, x, y, surrogate)) continue;
    const double aux_quot = (sum_smallest(surrogate, kq) - aux0) / h;
    const double true_quot = (slqp_objective(instance, kq, y) - f0) / h;
    report.tangency_residual = std::max(report.tangency_residual,
                                        std::abs(aux_quot - true_quot));
  }

  // Global minorization on independently sampled feasible points.
  for (int i = 0; i < num_directions; ++i) {
    for (int k = 0; k < K; ++k) y[k] = rng.uniform(0.0, instance.power_cap);
    if (!surrogate_rates(t, instance, x, y, surrogate)) continue;  // -inf surrogate
    const double excess = sum_smallest(surrogate, kq) - slqp_objective(instance, kq, y);
    report.minorization_violation = std::max(report.minorization_violation, excess);
  }
  return report;
}

}  // namespace slqp
