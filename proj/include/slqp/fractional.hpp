// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "slqp/network.hpp"
#include "slqp/solver.hpp"

namespace slqp {

enum class AlgorithmKind { qft, lft, sga, cwsr, random_power, sumrate };

std::string_view algorithm_name(AlgorithmKind kind);
AlgorithmKind parse_algorithm(std::string_view name);

// Quadratic-transform surrogate rate ln(1 + 2 x sqrt(A) - x^2 B).  Throws
// std::domain_error when the log argument is not positive.
double qft_aux_rate(double x, double signal, double interference);

// Lagrangian-transform surrogate rate -x B + ln(x (A + B)) + 1 for x > 0.
double lft_aux_rate(double x, double signal, double interference);

// Per-user multiplier updates that make the surrogate touch the true rate:
// x_k = sqrt(A_k)/B_k and x_k = 1/B_k respectively.
std::vector<double> qft_x_update(const NetworkInstance& instance, std::span<const double> p);
std::vector<double> lft_x_update(const NetworkInstance& instance, std::span<const double> p);

// One outer cycle of an alternating run: the objective after the power
// update, the surrogate objective right after the multiplier update (equal
// to the previous objective by construction), and inner-solver effort.
struct OuterIteration {
  int iter = 0;
  double objective_nats = 0.0;
  double aux_objective_nats = 0.0;
  int inner_iters = 0;
  double time_ms = 0.0;
};

struct OuterTrace {
  double initial_objective = 0.0;
  std::vector<OuterIteration> rows;
  bool inner_converged_all = true;

  // Columns: iter,objective_nats,aux_objective_nats,inner_iters,time_ms
  void write_csv(std::ostream& out) const;
};

struct OuterOptions {
  int max_outer = 100;
  double outer_tol = 1e-6;  // relative objective improvement between cycles
  SolverOptions inner;
};

struct MmRun {
  SolveResult result;
  OuterTrace trace;
};

// Sum-least-percentile objective of the true rates at p.
double slqp_objective(const NetworkInstance& instance, int kq, std::span<const double> p);

// Cyclic minorize-maximize runs alternating the multiplier update with an
// inner concave maximization of the surrogate over the feasible powers.
// The feasible set defaults to the per-transmitter box [0, pmax]^K.
MmRun run_qft(const NetworkInstance& instance, int kq, const OuterOptions& opts,
              std::span<const double> init, const FeasibleSet* feasible = nullptr);
MmRun run_lft(const NetworkInstance& instance, int kq, const OuterOptions& opts,
              std::span<const double> init, const FeasibleSet* feasible = nullptr);

// Parallel channels: maximize the sum of the kq smallest rates over the
// capped simplex.  Convex program, solved by projected supergradient ascent.
SolveResult solve_parallel_slqp(const ParallelChannelInstance& instance, int kq,
                                const SolverOptions& opts);

// Closed-form least-q-percentile (max of the kq-th smallest rate): mute the
// kq-1 noisiest channels and equalize the rest.
SolveResult solve_parallel_lqp(const ParallelChannelInstance& instance, int kq);

// Projected supergradient ascent applied directly to the nonconcave
// objective; a baseline without the surrogate machinery.
SolveResult run_sga_baseline(const NetworkInstance& instance, int kq, const SolverOptions& opts,
                             std::span<const double> init);

// Weighted sum-rate baseline with weights 1/G[k][k], run by the same
// quadratic-transform alternation.  The returned value and the trace's
// objective column report the percentile objective at metric_kq even
// though the iteration optimizes the weighted sum.
MmRun run_cwsr_baseline(const NetworkInstance& instance, int metric_kq, const OuterOptions& opts,
                        std::span<const double> init);

// Largest finite-difference ascent quotient (f(proj(p + h d)) - f(p)) / h
// over random unit directions; near zero at a directionally stationary
// point of the percentile objective.
double stationarity_check(const NetworkInstance& instance, int kq, std::span<const double> p,
                          int num_directions, double h, std::uint64_t seed = 0);

struct TangencyReport {
  double tangency_residual = 0.0;       // max directional-derivative gap at p
  double identity_gap = 0.0;            // |surrogate - objective| at p
  double minorization_violation = 0.0;  // max surrogate excess over sampled points
};

// Verify that the surrogate built at p (multipliers from the chosen
// transform) touches the objective at p with matching directional
// derivatives and stays below it elsewhere.
TangencyReport minorant_tangency_check(const NetworkInstance& instance, int kq,
                                       std::span<const double> p, int num_directions, double h,
                                       AlgorithmKind transform, std::uint64_t seed = 0);

}  // namespace slqp
