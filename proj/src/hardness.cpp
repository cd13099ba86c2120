// SPDX-License-Identifier: Apache-2.0
#include "slqp/hardness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace slqp {

ComponentGraph make_component_graph(int user_count, int kq, double noise_level,
                                    std::vector<std::pair<int, int>> edges) {
  if (user_count < 2) throw std::invalid_argument("component graph: need at least two users");
  if (kq < 2 || kq > user_count)
    throw std::invalid_argument("component graph: kq must lie in [2, user_count]");
  if (!(noise_level > kq))
    throw std::invalid_argument("component graph: noise_level must exceed kq");

  const int first = user_count - kq + 1;  // lowest component vertex, 1-indexed
  for (auto& [a, b] : edges) {
    if (a < first || a > user_count || b < first || b > user_count)
      throw std::invalid_argument("component graph: edge endpoint outside the component");
    if (a == b) throw std::invalid_argument("component graph: self-loops are not allowed");
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  // The component must be connected for the reduction to make sense.
  std::vector<std::vector<int>> adj(kq);
  for (const auto& [a, b] : edges) {
    adj[a - first].push_back(b - first);
    adj[b - first].push_back(a - first);
  }
  std::vector<char> seen(kq, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  if (reached != kq)
    throw std::invalid_argument("component graph: the component subgraph must be connected");

  return ComponentGraph{user_count, kq, noise_level, std::move(edges)};
}

ComponentGraph parse_component_graph(std::istream& in) {
  int user_count = 0, kq = 0;
  double noise_level = 0.0;
  if (!(in >> user_count >> kq >> noise_level))
    throw std::invalid_argument("component graph: header must be 'K kq noise_level'");
  std::vector<std::pair<int, int>> edges;
  int a = 0, b = 0;
  while (in >> a >> b) edges.emplace_back(a, b);
  if (!in.eof()) {
    in.clear();
    std::string tail;
    std::getline(in, tail);
    throw std::invalid_argument("component graph: malformed edge line near '" + tail + "'");
  }
  return make_component_graph(user_count, kq, noise_level, std::move(edges));
}

NetworkInstance build_instance(const ComponentGraph& graph) {
  const int K = graph.user_count;
  NetworkInstance instance;
  instance.user_count = K;
  instance.gains.assign(static_cast<std::size_t>(K) * K, 0.0);
  for (int k = 0; k < K; ++k) instance.gains[static_cast<std::size_t>(k) * K + k] = 1.0;
  const double cross = graph.noise_level * graph.kq * graph.kq;
  for (const auto& [a, b] : graph.edges) {
    instance.gains[static_cast<std::size_t>(a - 1) * K + (b - 1)] = cross;
    instance.gains[static_cast<std::size_t>(b - 1) * K + (a - 1)] = cross;
  }
  instance.noise_power = graph.noise_level;
  instance.power_cap = 1.0;
  instance.validate();
  return instance;
}

std::pair<std::vector<double>, double> brute_force_binary_optimum(const NetworkInstance& instance,
                                                                  int kq) {
  const int K = instance.user_count;
  if (K > 20) throw std::invalid_argument("brute force: limited to at most 20 users");
  if (kq < 1 || kq > K) throw std::invalid_argument("brute force: kq out of range");

  std::vector<double> p(K), r(K), work(K);
  std::vector<double> best_p;
  double best_value = -1.0;
  const double cap = instance.power_cap;

  for (std::uint64_t m = 0; m < (1ull << K); ++m) {
    // Bit K-1 is user 1 so that increasing m enumerates lexicographically.
    for (int k = 0; k < K; ++k) p[k] = (m >> (K - 1 - k)) & 1 ? cap : 0.0;
    for (int k = 0; k < K; ++k) {
      double interference = instance.noise_power;
      for (int j = 0; j < K; ++j)
        if (j != k && p[j] != 0.0) interference += p[j] * instance.gain(j, k);
      r[k] = std::log1p(p[k] * instance.gain(k, k) / interference);
    }
    work = r;
    std::nth_element(work.begin(), work.begin() + (kq - 1), work.end());
    const double value = std::accumulate(work.begin(), work.begin() + kq, 0.0);
    if (value > best_value) {
      best_value = value;
      best_p = p;
    }
  }
  return {best_p, best_value};
}

int mis_size(const ComponentGraph& graph) {
  const int n = graph.kq;
  if (n > 20) throw std::invalid_argument("mis_size: limited to components of at most 20 vertices");
  const int first = graph.user_count - n + 1;
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& [a, b] : graph.edges) {
    adj[a - first] |= 1u << (b - first);
    adj[b - first] |= 1u << (a - first);
  }
  int best = 0;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    bool independent = true;
    for (std::uint32_t rest = m; rest && independent; rest &= rest - 1)
      independent = (adj[std::countr_zero(rest)] & m) == 0;
    if (independent) best = std::max(best, std::popcount(m));
  }
  return best;
}

double expected_optimum(const ComponentGraph& graph) {
  return mis_size(graph) * std::log1p(1.0 / graph.noise_level);
}

}  // namespace slqp
