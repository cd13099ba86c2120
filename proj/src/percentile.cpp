// SPDX-License-Identifier: Apache-2.0
#include "slqp/percentile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slqp {

int percentile_number(int user_count, double q) {
  if (user_count < 1) throw std::invalid_argument("percentile_number: user_count must be positive");
  if (!(q > 0.0) || q > 100.0) throw std::invalid_argument("percentile_number: q must lie in (0, 100]");
  const int K = user_count;
  int k = static_cast<int>(std::ceil(q * K / 100.0));
  k = std::clamp(k, 1, K);
  // Settle floating-point edge cases against the defining predicate.
  while (k > 1 && 100.0 * (k - 1) / K >= q) --k;
  while (k < K && 100.0 * k / K < q) ++k;
  return k;
}

PercentileSpec make_percentile_spec(int user_count, double q) {
  return PercentileSpec{user_count, q, percentile_number(user_count, q)};
}

namespace {

void check_kq(std::size_t n, int kq) {
  if (n == 0) throw std::invalid_argument("percentile sum: empty vector");
  if (kq < 1 || static_cast<std::size_t>(kq) > n)
    throw std::invalid_argument("percentile sum: kq out of range");
}

}  // namespace

double sum_smallest(std::span<const double> x, int kq) {
  check_kq(x.size(), kq);
  std::vector<double> buf(x.begin(), x.end());
  std::nth_element(buf.begin(), buf.begin() + (kq - 1), buf.end());
  return std::accumulate(buf.begin(), buf.begin() + kq, 0.0);
}

double sum_largest(std::span<const double> x, int kq) {
  check_kq(x.size(), kq);
  std::vector<double> buf(x.begin(), x.end());
  std::nth_element(buf.begin(), buf.begin() + (kq - 1), buf.end(), std::greater<>{});
  return std::accumulate(buf.begin(), buf.begin() + kq, 0.0);
}

SelectionMask sum_smallest_supergradient(std::span<const double> x, int kq) {
  check_kq(x.size(), kq);
  std::vector<int> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return x[i] < x[j]; });
  SelectionMask mask;
  mask.a.assign(x.size(), 0);
  mask.weight = kq;
  for (int i = 0; i < kq; ++i) mask.a[idx[i]] = 1;
  return mask;
}

}  // namespace slqp
