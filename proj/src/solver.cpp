// SPDX-License-Identifier: Apache-2.0
#include "slqp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "internal.hpp"

namespace slqp {

FeasibleSet FeasibleSet::box(std::vector<double> lower, std::vector<double> upper) {
  if (lower.empty() || lower.size() != upper.size())
    throw std::invalid_argument("feasible set: box bounds must be nonempty and equal length");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] <= upper[i]))
      throw std::invalid_argument("feasible set: box needs lower <= upper");
  FeasibleSet set;
  set.kind = Kind::box;
  set.dim = static_cast<int>(lower.size());
  set.lower = std::move(lower);
  set.upper = std::move(upper);
  return set;
}

FeasibleSet FeasibleSet::uniform_box(int dim, double lower, double upper) {
  if (dim < 1) throw std::invalid_argument("feasible set: dimension must be positive");
  return box(std::vector<double>(dim, lower), std::vector<double>(dim, upper));
}

FeasibleSet FeasibleSet::simplex_cap(int dim, double total_cap) {
  if (dim < 1) throw std::invalid_argument("feasible set: dimension must be positive");
  if (!(total_cap > 0.0)) throw std::invalid_argument("feasible set: total cap must be positive");
  FeasibleSet set;
  set.kind = Kind::simplex_cap;
  set.dim = dim;
  set.total_cap = total_cap;
  return set;
}

std::vector<double> project(const FeasibleSet& set, std::span<const double> p) {
  if (p.size() != static_cast<std::size_t>(set.dim))
    throw std::invalid_argument("project: point dimension mismatch");
  std::vector<double> out(p.begin(), p.end());
  if (set.kind == FeasibleSet::Kind::box) {
    for (int i = 0; i < set.dim; ++i) out[i] = std::clamp(out[i], set.lower[i], set.upper[i]);
    return out;
  }

  // Capped simplex.  Clipping negatives is enough when the budget holds;
  // otherwise shift by the sorted-threshold multiplier.
  double clipped_sum = 0.0;
  for (double v : out) clipped_sum += std::max(0.0, v);
  if (clipped_sum <= set.total_cap) {
    for (double& v : out) v = std::max(0.0, v);
    return out;
  }
  std::vector<double> u(out);
  std::sort(u.begin(), u.end(), std::greater<>{});
  double css = 0.0, theta = 0.0;
  for (int j = 0; j < set.dim; ++j) {
    css += u[j];
    const double cand = (css - set.total_cap) / (j + 1);
    if (u[j] - cand > 0.0) theta = cand;
  }
  for (double& v : out) v = std::max(0.0, v - theta);
  return out;
}

namespace {

double default_step(const FeasibleSet& set) {
  if (set.kind == FeasibleSet::Kind::simplex_cap) return set.total_cap / 10.0;
  double span = 0.0;
  for (int i = 0; i < set.dim; ++i) span = std::max(span, set.upper[i] - set.lower[i]);
  return span > 0.0 ? span / 10.0 : 1.0;
}

}  // namespace

SolveResult maximize_concave(const ConcaveOracle& oracle, const FeasibleSet& set,
                             const SolverOptions& opts, std::span<const double> init) {
  if (opts.max_iters < 1) throw std::invalid_argument("solver: max_iters must be positive");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solver: tol must be positive");
  // Stage-annealed step: supergradient steps are not ascent steps, so a stage
  // ends when a whole window passes without improving the incumbent; the step
  // then shrinks and the search restarts from the incumbent.  Convergence is
  // declared only once the step has annealed down to the resolution floor.
  constexpr int kWindow = 50;
  constexpr double kShrink = 0.25;

  const double step0 = opts.step0 > 0.0 ? opts.step0 : default_step(set);
  const double step_floor = step0 * 1e-5;
  std::vector<double> p = project(set, init);
  ObjectiveEval eval = oracle(p);
  if (!eval.in_domain)
    throw std::invalid_argument("solver: initial point lies outside the objective domain");
  if (eval.supergradient.size() != p.size())
    throw std::invalid_argument("solver: supergradient dimension mismatch");

  SolveResult result;
  result.p_star = p;
  result.value = eval.value;
  result.trace.reserve(std::min(opts.max_iters, 1 << 20));

  std::vector<double> cand(p.size());
  double alpha = step0;
  double window_best = result.value;
  for (int t = 1; t <= opts.max_iters; ++t) {
    result.iterations = t;
    const double gsize = detail::norm2(eval.supergradient);
    if (!(gsize > 1e-300)) {  // (near-)stationary point
      result.converged = true;
      break;
    }
    double step = alpha / gsize;
    ObjectiveEval next;
    bool moved = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      for (std::size_t i = 0; i < p.size(); ++i)
        cand[i] = p[i] + step * eval.supergradient[i];
      cand = project(set, cand);
      next = oracle(cand);
      if (next.in_domain) {
        moved = true;
        break;
      }
      step *= 0.5;  // log-domain guard: reject and shorten the step
    }
    if (moved) {
      p.swap(cand);
      eval = std::move(next);
      if (eval.value > result.value) {
        result.value = eval.value;
        result.p_star = p;
      }
    }
    result.trace.push_back(result.value);
    if (t % kWindow == 0) {
      const double gain = result.value - window_best;
      if (gain <= opts.tol * std::max(1.0, std::abs(result.value))) {
        if (alpha <= step_floor) {
          result.converged = true;
          break;
        }
        alpha = std::max(alpha * kShrink, step_floor);
        p = result.p_star;  // restart the stage from the incumbent
        eval = oracle(p);
      }
      window_best = result.value;
    }
  }
  return result;
}

std::vector<double> water_fill(std::span<const double> noise, double power_budget) {
  const int K = static_cast<int>(noise.size());
  if (K == 0) throw std::invalid_argument("water_fill: empty noise vector");
  for (double z : noise)
    if (!(z > 0.0)) throw std::invalid_argument("water_fill: noise powers must be positive");
  if (!(power_budget > 0.0))
    throw std::invalid_argument("water_fill: power budget must be positive");

  std::vector<int> idx(K);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return noise[a] < noise[b]; });

  // Fill the m quietest channels to a common level mu; the largest m with
  // mu(m) above the m-th noise floor is optimal.
  double prefix = 0.0, mu = 0.0;
  int active = 0;
  for (int m = 1; m <= K; ++m) {
    prefix += noise[idx[m - 1]];
    const double cand = (power_budget + prefix) / m;
    if (cand > noise[idx[m - 1]]) {
      mu = cand;
      active = m;
    }
  }
  std::vector<double> p(K, 0.0);
  for (int m = 0; m < active; ++m) p[idx[m]] = mu - noise[idx[m]];
  return p;
}

}  // namespace slqp
