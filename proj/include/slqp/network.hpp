// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace slqp {

// Interference network with one transmitter per user.  gains is row-major:
// gains[j * user_count + k] is the power gain from transmitter j to
// receiver k.  Powers are in watts, rates in nats.
struct NetworkInstance {
  int user_count = 0;
  std::vector<double> gains;
  double noise_power = 0.0;  // receiver noise, watts
  double power_cap = 0.0;    // per-transmitter limit, watts

  double gain(int j, int k) const { return gains[static_cast<std::size_t>(j) * user_count + k]; }
  void validate() const;  // throws std::invalid_argument on a malformed instance
};

// Interference-free parallel channels under a total power budget.
// Noise powers are kept sorted in descending order.
struct ParallelChannelInstance {
  std::vector<double> noise;
  double power_budget = 0.0;
};

ParallelChannelInstance make_parallel_instance(std::vector<double> noise, double power_budget);

// Seven-cell wraparound cellular layout parameters.
struct NetworkConfig {
  int cells = 7;
  int users_per_cell = 8;
  double isd_m = 2000.0;          // inter-site distance
  double d0_m = 0.3920;           // path-loss reference distance
  double zeta = 3.76;             // path-loss exponent
  double noise_psd_dbm_hz = -143.0;
  double bandwidth_hz = 20.0e6;
  double pmax_dbm = 43.0;
  std::uint64_t seed = 1;
};

double dbm_to_watts(double dbm);

// Amplitude-squared path loss (1 + d/d0)^(-zeta).
double pathloss_power(double distance_m, double d0_m, double zeta);

// Drop users uniformly in each hexagonal cell and draw Rayleigh block
// fading for every transmitter/receiver pair.  Deterministic in the seed.
NetworkInstance generate_cellular(const NetworkConfig& config);

// Achievable rates r_k = ln(1 + p_k G[k][k] / (sum_{j != k} p_j G[j][k] + sigma^2)).
std::vector<double> rates(const NetworkInstance& instance, std::span<const double> p);

// Received signal power A_k and interference-plus-noise power B_k at user k.
std::pair<double, double> signal_interference(const NetworkInstance& instance,
                                              std::span<const double> p, int k);

// Rates ln(1 + p_k / z_k) for parallel channels.
std::vector<double> parallel_rates(const ParallelChannelInstance& instance,
                                   std::span<const double> p);

// JSON round trip with schema {"K", "G" (row-major), "sigma2", "pmax"}.
std::string to_json(const NetworkInstance& instance);
NetworkInstance instance_from_json(const std::string& text);

}  // namespace slqp
