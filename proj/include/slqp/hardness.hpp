// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "slqp/network.hpp"

namespace slqp {

// Reduction gadget: user_count - kq isolated users plus a connected graph
// on the last kq users whose edges carry cross gain noise_level * kq^2;
// every user sees effective noise noise_level and unit direct gain.
struct ComponentGraph {
  int user_count = 0;
  int kq = 0;
  double noise_level = 0.0;                    // must exceed kq
  std::vector<std::pair<int, int>> edges;      // 1-indexed, endpoints > user_count - kq
};

// Validates ranges, simplicity, and connectivity of the component.
ComponentGraph make_component_graph(int user_count, int kq, double noise_level,
                                    std::vector<std::pair<int, int>> edges);

// Text form: first line "K kq noise_level", then one "j k" edge per line.
ComponentGraph parse_component_graph(std::istream& in);

NetworkInstance build_instance(const ComponentGraph& graph);

// Exhaustive maximum of the kq-smallest rate sum over on/off power vectors
// p in {0, pmax}^K; ties resolve to the lexicographically smallest vector.
// Requires user_count <= 20.
std::pair<std::vector<double>, double> brute_force_binary_optimum(const NetworkInstance& instance,
                                                                  int kq);

// Maximum independent set size of the component subgraph (kq <= 20).
int mis_size(const ComponentGraph& graph);

// mis_size * ln(1 + 1/noise_level): the planted optimum value.
double expected_optimum(const ComponentGraph& graph);

}  // namespace slqp
