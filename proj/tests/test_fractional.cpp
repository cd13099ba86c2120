// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "slqp/fractional.hpp"
#include "slqp/network.hpp"
#include "slqp/percentile.hpp"
#include "slqp/solver.hpp"

using namespace slqp;

namespace {

NetworkInstance diagonal_instance(std::vector<double> direct, double noise, double cap) {
  NetworkInstance inst;
  inst.user_count = static_cast<int>(direct.size());
  inst.gains.assign(static_cast<std::size_t>(inst.user_count) * inst.user_count, 0.0);
  for (int k = 0; k < inst.user_count; ++k)
    inst.gains[static_cast<std::size_t>(k) * inst.user_count + k] = direct[k];
  inst.noise_power = noise;
  inst.power_cap = cap;
  return inst;
}

NetworkInstance random_instance(std::mt19937_64& gen, int K, double cross_scale = 0.3) {
  std::uniform_real_distribution<double> diag(0.5, 2.0);
  std::uniform_real_distribution<double> cross(0.0, cross_scale);
  NetworkInstance inst;
  inst.user_count = K;
  inst.gains.resize(static_cast<std::size_t>(K) * K);
  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k)
      inst.gains[static_cast<std::size_t>(j) * K + k] = j == k ? diag(gen) : cross(gen);
  inst.noise_power = 1.0;
  inst.power_cap = 1.0;
  return inst;
}

std::vector<double> interior_point(std::mt19937_64& gen, int K, double cap) {
  std::uniform_real_distribution<double> d(0.1 * cap, 0.9 * cap);
  std::vector<double> p(K);
  for (auto& v : p) v = d(gen);
  return p;
}

double sum_rate(const NetworkInstance& inst, const std::vector<double>& p) {
  const auto r = rates(inst, p);
  return std::accumulate(r.begin(), r.end(), 0.0);
}

}  // namespace

TEST_CASE("surrogate rate formulas on hand values") {
  CHECK(qft_aux_rate(1.0, 4.0, 2.0) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK(lft_aux_rate(1.0, 1.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  CHECK_THROWS_AS(qft_aux_rate(10.0, 0.01, 5.0), std::domain_error);
  CHECK_THROWS_AS(lft_aux_rate(0.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(lft_aux_rate(-1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("multiplier updates restore the true rate") {
  auto inst = diagonal_instance({1.0, 1.0}, 1.0, 4.0);
  const std::vector<double> p{1.0, 1.0};
  const auto xq = qft_x_update(inst, p);
  CHECK(xq[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(xq[1] == doctest::Approx(1.0).epsilon(1e-14));
  const auto xl = lft_x_update(inst, p);
  CHECK(xl[0] == doctest::Approx(1.0).epsilon(1e-14));

  // At the update, both surrogates evaluate to ln(1 + A/B) exactly.
  std::mt19937_64 gen(404);
  for (int trial = 0; trial < 200; ++trial) {
    const int K = 2 + static_cast<int>(gen() % 6);
    const auto instance = random_instance(gen, K);
    const auto pt = interior_point(gen, K, instance.power_cap);
    const auto r = rates(instance, pt);
    const auto xu = qft_x_update(instance, pt);
    const auto xv = lft_x_update(instance, pt);
    for (int k = 0; k < K; ++k) {
      const auto [a, b] = signal_interference(instance, pt, k);
      CHECK(qft_aux_rate(xu[k], a, b) == doctest::Approx(r[k]).epsilon(1e-12));
      CHECK(lft_aux_rate(xv[k], a, b) == doctest::Approx(r[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("surrogates minorize the true rate for any multiplier") {
  std::mt19937_64 gen(808);
  std::uniform_real_distribution<double> xs(0.0, 3.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int K = 2 + static_cast<int>(gen() % 5);
    const auto instance = random_instance(gen, K);
    const auto pt = interior_point(gen, K, instance.power_cap);
    const auto r = rates(instance, pt);
    for (int k = 0; k < K; ++k) {
      const auto [a, b] = signal_interference(instance, pt, k);
      const double x = xs(gen);
      const double arg = 1.0 + 2.0 * x * std::sqrt(a) - x * x * b;
      if (arg > 0.0) CHECK(qft_aux_rate(x, a, b) <= r[k] + 1e-12);
      if (x > 0.0) CHECK(lft_aux_rate(x, a, b) <= r[k] + 1e-12);
    }
  }
}

TEST_CASE("alternating runs are monotone with a tight expansion identity") {
  std::mt19937_64 gen(11001);
  for (int trial = 0; trial < 10; ++trial) {
    const int K = 5;
    const auto instance = random_instance(gen, K, 0.5);
    const int kq = 2;
    const auto init = interior_point(gen, K, instance.power_cap);

    OuterOptions opts;
    opts.inner.max_iters = 3000;
    for (bool use_qft : {true, false}) {
      const auto run = use_qft ? run_qft(instance, kq, opts, init)
                               : run_lft(instance, kq, opts, init);
      REQUIRE(!run.trace.rows.empty());
      double prev = run.trace.initial_objective;
      for (const auto& row : run.trace.rows) {
        CHECK(row.objective_nats >= prev - 1e-6);
        // The surrogate right after the multiplier update equals the
        // objective at the expansion point.
        CHECK(row.aux_objective_nats ==
              doctest::Approx(prev).epsilon(1e-12).scale(std::max(1.0, std::abs(prev))));
        prev = row.objective_nats;
      }
      CHECK(run.result.value >= run.trace.initial_objective - 1e-12);
      CHECK(run.result.converged);
      for (double v : run.result.p_star) {
        CHECK(v >= 0.0);
        CHECK(v <= instance.power_cap + 1e-12);
      }
      for (std::size_t i = 1; i < run.result.trace.size(); ++i)
        CHECK(run.result.trace[i] >= run.result.trace[i - 1]);
    }
  }
}

TEST_CASE("isolated users drive both transforms to full power") {
  const auto instance = diagonal_instance({1.0, 0.7, 1.4}, 1.0, 2.0);
  const std::vector<double> init{0.2, 0.2, 0.2};
  OuterOptions opts;
  const double expected = slqp_objective(instance, 3, std::vector<double>{2.0, 2.0, 2.0});

  const auto q = run_qft(instance, 3, opts, init);
  CHECK(q.result.value == doctest::Approx(expected).epsilon(1e-6));
  const auto l = run_lft(instance, 3, opts, init);
  CHECK(l.result.value == doctest::Approx(expected).epsilon(1e-6));

  SolverOptions sga_opts;
  const auto s = run_sga_baseline(instance, 3, sga_opts, init);
  CHECK(s.value == doctest::Approx(expected).epsilon(1e-6));

  const auto c = run_cwsr_baseline(instance, 3, opts, init);
  CHECK(c.result.value == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("embedded parallel channels recover water filling and max-min") {
  std::mt19937_64 gen(606);
  std::uniform_real_distribution<double> zs(0.2, 3.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int K = 3 + static_cast<int>(gen() % 4);
    std::vector<double> z(K);
    for (auto& v : z) v = zs(gen);
    const double budget = 2.0;

    // Diagonal embedding: direct gain 1/z_k, unit noise, budget-capped.
    std::vector<double> direct(K);
    for (int k = 0; k < K; ++k) direct[k] = 1.0 / z[k];
    const auto instance = diagonal_instance(direct, 1.0, budget);
    const auto cap_set = FeasibleSet::simplex_cap(K, budget);

    OuterOptions opts;
    opts.inner.max_iters = 40000;
    opts.inner.tol = 1e-11;
    const std::vector<double> init(K, budget / (2.0 * K));

    const auto wf = water_fill(z, budget);
    double wf_value = 0.0;
    for (int k = 0; k < K; ++k) wf_value += std::log1p(wf[k] / z[k]);
    const auto sum_run = run_qft(instance, K, opts, init, &cap_set);
    CHECK(sum_run.result.value == doctest::Approx(wf_value).epsilon(1e-3));

    const double maxmin = std::log1p(budget / std::accumulate(z.begin(), z.end(), 0.0));
    const auto min_run = run_qft(instance, 1, opts, init, &cap_set);
    CHECK(min_run.result.value == doctest::Approx(maxmin).epsilon(1e-3));
  }
}

TEST_CASE("parallel percentile solver hits both closed-form corners") {
  std::mt19937_64 gen(2718);
  std::uniform_real_distribution<double> zs(0.1, 4.0);
  std::uniform_real_distribution<double> ps(0.5, 5.0);
  SolverOptions opts;
  opts.max_iters = 120000;
  opts.tol = 1e-12;
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 2 + static_cast<int>(gen() % 9);  // up to 10
    std::vector<double> z(K);
    for (auto& v : z) v = zs(gen);
    const auto inst = make_parallel_instance(z, ps(gen));

    const auto full = solve_parallel_slqp(inst, K, opts);
    const auto wf = water_fill(inst.noise, inst.power_budget);
    double wf_value = 0.0;
    for (int k = 0; k < K; ++k) wf_value += std::log1p(wf[k] / inst.noise[k]);
    CHECK(std::abs(full.value - wf_value) <= 1e-3 * std::max(1.0, std::abs(wf_value)));

    const auto minimum = solve_parallel_slqp(inst, 1, opts);
    const double maxmin = std::log1p(
        inst.power_budget / std::accumulate(inst.noise.begin(), inst.noise.end(), 0.0));
    CHECK(std::abs(minimum.value - maxmin) <= 1e-3 * std::max(1.0, std::abs(maxmin)));
  }
}

TEST_CASE("closed-form percentile level allocation") {
  const auto inst = make_parallel_instance({4.0, 2.0, 1.0}, 3.0);
  const auto res = solve_parallel_lqp(inst, 2);
  CHECK(res.p_star[0] == 0.0);
  CHECK(res.p_star[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.p_star[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.value == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(std::accumulate(res.p_star.begin(), res.p_star.end(), 0.0) ==
        doctest::Approx(3.0).epsilon(1e-12));

  // kq = 1 reduces to the max-min closed form.
  const auto mm = solve_parallel_lqp(inst, 1);
  CHECK(mm.value == doctest::Approx(std::log1p(3.0 / 7.0)).epsilon(1e-14));

  CHECK_THROWS_AS(solve_parallel_lqp(inst, 0), std::invalid_argument);
  CHECK_THROWS_AS(solve_parallel_lqp(inst, 4), std::invalid_argument);
}

TEST_CASE("percentile level solution is optimal among sampled allocations") {
  // The kq-th smallest rate at the closed form dominates random feasible
  // allocations (checked by sampling the simplex).
  std::mt19937_64 gen(515);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto inst = make_parallel_instance({3.0, 2.5, 1.0, 0.4}, 2.0);
  for (int kq = 1; kq <= 4; ++kq) {
    const auto res = solve_parallel_lqp(inst, kq);
    for (int s = 0; s < 20000; ++s) {
      std::vector<double> p(4);
      double tot = 0.0;
      for (auto& v : p) {
        v = -std::log(1.0 - unit(gen));
        tot += v;
      }
      for (auto& v : p) v *= inst.power_budget / tot;
      auto r = parallel_rates(inst, p);
      std::nth_element(r.begin(), r.begin() + (kq - 1), r.end());
      CHECK(r[kq - 1] <= res.value + 1e-9);
    }
  }
}

TEST_CASE("stationarity diagnostic signs") {
  const auto instance = diagonal_instance({1.0, 1.0, 1.0}, 1.0, 2.0);

  // The origin is far from stationary: every rate grows along +d.
  const std::vector<double> origin(3, 0.0);
  CHECK(stationarity_check(instance, 3, origin, 100, 1e-4) > 0.05);

  // The full-power corner is optimal for isolated users; all feasible
  // directions point downhill.
  const std::vector<double> corner(3, 2.0);
  CHECK(stationarity_check(instance, 3, corner, 100, 1e-4) <= 1e-6);

  CHECK_THROWS_AS(stationarity_check(instance, 3, origin, 0, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(stationarity_check(instance, 3, origin, 10, 0.0), std::invalid_argument);
}

TEST_CASE("tangency diagnostic at interior points") {
  std::mt19937_64 gen(9090);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 4 + static_cast<int>(gen() % 3);
    const auto instance = random_instance(gen, K, 0.4);
    const int kq = 1 + static_cast<int>(gen() % K);
    const auto pt = interior_point(gen, K, instance.power_cap);
    const double h = 1e-4;
    for (AlgorithmKind t : {AlgorithmKind::qft, AlgorithmKind::lft}) {
      const auto report = minorant_tangency_check(instance, kq, pt, 100, h, t, 5);
      CHECK(report.identity_gap <= 1e-12 * std::max(1.0, std::abs(
          slqp_objective(instance, kq, pt))));
      CHECK(report.tangency_residual <= 10.0 * h);
      CHECK(report.minorization_violation <= 1e-9);
    }
  }
  const auto instance = random_instance(gen, 4, 0.4);
  CHECK_THROWS_AS(minorant_tangency_check(instance, 2, std::vector<double>(4, 0.5), 10, 1e-4,
                                          AlgorithmKind::sga),
                  std::invalid_argument);
}

TEST_CASE("relabeling users relabels the optimized powers") {
  std::mt19937_64 gen(77);
  const int K = 4;
  const auto instance = random_instance(gen, K, 0.5);
  const std::vector<int> perm{2, 0, 3, 1};

  NetworkInstance permuted;
  permuted.user_count = K;
  permuted.gains.resize(static_cast<std::size_t>(K) * K);
  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k)
      permuted.gains[static_cast<std::size_t>(perm[j]) * K + perm[k]] =
          instance.gain(j, k);
  permuted.noise_power = instance.noise_power;
  permuted.power_cap = instance.power_cap;

  const auto init = interior_point(gen, K, instance.power_cap);
  std::vector<double> init_perm(K);
  for (int k = 0; k < K; ++k) init_perm[perm[k]] = init[k];

  OuterOptions opts;
  opts.max_outer = 2;
  opts.outer_tol = 1e-300;  // run both outer cycles in lockstep
  opts.inner.max_iters = 500;
  opts.inner.tol = 1e-14;

  const auto base = run_qft(instance, 2, opts, init);
  const auto moved = run_qft(permuted, 2, opts, init_perm);
  CHECK(moved.result.value ==
        doctest::Approx(base.result.value).epsilon(1e-9));
  for (int k = 0; k < K; ++k)
    CHECK(moved.result.p_star[perm[k]] == doctest::Approx(base.result.p_star[k]).epsilon(1e-7));
}

TEST_CASE("algorithm names round trip") {
  for (AlgorithmKind kind : {AlgorithmKind::qft, AlgorithmKind::lft, AlgorithmKind::sga,
                             AlgorithmKind::cwsr, AlgorithmKind::random_power,
                             AlgorithmKind::sumrate})
    CHECK(parse_algorithm(algorithm_name(kind)) == kind);
  CHECK_THROWS_AS(parse_algorithm("newton"), std::invalid_argument);
}

TEST_CASE("run input validation") {
  const auto instance = diagonal_instance({1.0, 1.0}, 1.0, 1.0);
  const std::vector<double> init{0.5, 0.5};
  OuterOptions opts;
  CHECK_THROWS_AS(run_qft(instance, 0, opts, init), std::invalid_argument);
  CHECK_THROWS_AS(run_qft(instance, 3, opts, init), std::invalid_argument);
  CHECK_THROWS_AS(run_qft(instance, 1, opts, std::vector<double>{0.5}), std::invalid_argument);
  OuterOptions bad;
  bad.max_outer = 0;
  CHECK_THROWS_AS(run_lft(instance, 1, bad, init), std::invalid_argument);
  SolverOptions sopts;
  CHECK_THROWS_AS(run_sga_baseline(instance, 5, sopts, init), std::invalid_argument);
}
