// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace slqp {

// Number of entries that fall at or below the q-th percentile of K values:
// the smallest positive k with 100*k/K >= q.  q must lie in (0, 100].
int percentile_number(int user_count, double q);

struct PercentileSpec {
  int user_count = 0;
  double q = 0.0;
  int kq = 0;  // percentile_number(user_count, q)
};

PercentileSpec make_percentile_spec(int user_count, double q);

// Sum of the kq smallest entries of x.  Concave and nondecreasing in x.
double sum_smallest(std::span<const double> x, int kq);

// Sum of the kq largest entries of x.  Convex and nondecreasing in x.
double sum_largest(std::span<const double> x, int kq);

// Binary selection of kq entries; weight is the number of ones.
struct SelectionMask {
  std::vector<std::uint8_t> a;
  int weight = 0;
};

// A supergradient of sum_smallest at x: indicator of the kq smallest
// entries, ties broken toward the lowest index.
SelectionMask sum_smallest_supergradient(std::span<const double> x, int kq);

}  // namespace slqp
