// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace slqp {

// Per-coordinate box [lower, upper] or the capped simplex
// { p >= 0, sum(p) <= total_cap }.
struct FeasibleSet {
  enum class Kind { box, simplex_cap };

  Kind kind = Kind::box;
  std::vector<double> lower, upper;  // box bounds
  double total_cap = 0.0;            // simplex cap
  int dim = 0;

  static FeasibleSet box(std::vector<double> lower, std::vector<double> upper);
  static FeasibleSet uniform_box(int dim, double lower, double upper);
  static FeasibleSet simplex_cap(int dim, double total_cap);
};

// Euclidean projection onto the feasible set.
std::vector<double> project(const FeasibleSet& set, std::span<const double> p);

struct SolverOptions {
  int max_iters = 20000;
  double tol = 1e-8;   // relative best-value improvement over a 50-iteration window
  double step0 = 0.0;  // initial step length; 0 selects a tenth of the set scale
};

struct SolveResult {
  std::vector<double> p_star;
  double value = 0.0;
  int iterations = 0;
  std::vector<double> trace;  // best value after each iteration, non-decreasing
  bool converged = false;
};

// Objective sample: value and one supergradient.  in_domain = false marks a
// point outside the objective's domain (e.g. a log argument fell below
// zero); the solver then backtracks the step.
struct ObjectiveEval {
  double value = 0.0;
  std::vector<double> supergradient;
  bool in_domain = true;
};

using ConcaveOracle = std::function<ObjectiveEval(std::span<const double>)>;

// Projected supergradient ascent with step lengths step0/sqrt(t) along the
// normalized supergradient, tracking the best iterate seen.  Convergence to
// the optimum is guaranteed for concave objectives; the routine itself only
// requires an oracle and can be (carefully) applied as a heuristic
// otherwise.
SolveResult maximize_concave(const ConcaveOracle& oracle, const FeasibleSet& set,
                             const SolverOptions& opts, std::span<const double> init);

// Water-filling: maximize sum_k ln(1 + p_k / noise_k) subject to p >= 0 and
// sum(p) <= budget.  Returns the exact allocation max(0, mu - noise_k).
std::vector<double> water_fill(std::span<const double> noise, double power_budget);

}  // namespace slqp
