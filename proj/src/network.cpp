// SPDX-License-Identifier: Apache-2.0
#include "slqp/network.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "json.hpp"

#include "internal.hpp"

namespace slqp {

void NetworkInstance::validate() const {
  if (user_count < 1) throw std::invalid_argument("instance: user_count must be positive");
  if (gains.size() != static_cast<std::size_t>(user_count) * user_count)
    throw std::invalid_argument("instance: gains must hold user_count^2 entries");
  for (double g : gains)
    if (!(g >= 0.0) || !std::isfinite(g))
      throw std::invalid_argument("instance: gains must be finite and nonnegative");
  for (int k = 0; k < user_count; ++k)
    if (!(gain(k, k) > 0.0)) throw std::invalid_argument("instance: direct gains must be positive");
  if (!(noise_power > 0.0)) throw std::invalid_argument("instance: sigma2 must be positive");
  if (!(power_cap > 0.0)) throw std::invalid_argument("instance: pmax must be positive");
}

ParallelChannelInstance make_parallel_instance(std::vector<double> noise, double power_budget) {
  if (noise.empty()) throw std::invalid_argument("parallel instance: empty noise vector");
  for (double z : noise)
    if (!(z > 0.0) || !std::isfinite(z))
      throw std::invalid_argument("parallel instance: noise powers must be positive");
  if (!(power_budget > 0.0))
    throw std::invalid_argument("parallel instance: power budget must be positive");
  std::sort(noise.begin(), noise.end(), std::greater<>{});
  return ParallelChannelInstance{std::move(noise), power_budget};
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double pathloss_power(double distance_m, double d0_m, double zeta) {
  if (distance_m < 0.0 || !(d0_m > 0.0))
    throw std::invalid_argument("pathloss: distance must be nonnegative and d0 positive");
  return std::pow(1.0 + distance_m / d0_m, -zeta);
}

namespace {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

double dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Regular hexagon centred at the origin with apothem isd/2: the Voronoi
// cell of a site against its six neighbours at distance isd.
bool in_hexagon(Vec2 p, double isd) {
  const double a = isd / 2.0;
  const double s3 = std::sqrt(3.0) / 2.0;
  return std::abs(p.x) <= a && std::abs(0.5 * p.x + s3 * p.y) <= a &&
         std::abs(-0.5 * p.x + s3 * p.y) <= a;
}

}  // namespace

NetworkInstance generate_cellular(const NetworkConfig& config) {
  if (config.cells != 7)
    throw std::invalid_argument("generate_cellular: the wraparound layout requires exactly 7 cells");
  if (config.users_per_cell < 1)
    throw std::invalid_argument("generate_cellular: users_per_cell must be positive");
  if (!(config.isd_m > 0.0) || !(config.d0_m > 0.0) || !(config.zeta > 0.0))
    throw std::invalid_argument("generate_cellular: isd_m, d0_m, and zeta must be positive");
  if (!(config.bandwidth_hz > 0.0))
    throw std::invalid_argument("generate_cellular: bandwidth_hz must be positive");

  const double isd = config.isd_m;

  // One centre site ringed by six sites at distance isd.
  std::array<Vec2, 7> sites;
  sites[0] = {0.0, 0.0};
  for (int i = 0; i < 6; ++i) {
    const double ang = M_PI / 3.0 * i;
    sites[i + 1] = {isd * std::cos(ang), isd * std::sin(ang)};
  }

  // The 7-cell cluster tiles the plane with a sqrt(7)*isd super-lattice;
  // wraparound distance takes the minimum over the six mirror shifts.
  const double s3 = std::sqrt(3.0);
  const std::array<Vec2, 7> shifts = {
      Vec2{0.0, 0.0},
      Vec2{2.5 * isd, s3 / 2.0 * isd},   Vec2{-2.5 * isd, -s3 / 2.0 * isd},
      Vec2{0.5 * isd, 1.5 * s3 * isd},   Vec2{-0.5 * isd, -1.5 * s3 * isd},
      Vec2{-2.0 * isd, s3 * isd},        Vec2{2.0 * isd, -s3 * isd},
  };
  const auto wrap_dist = [&](Vec2 a, Vec2 b) {
    double best = 1e300;
    for (const auto& t : shifts) best = std::min(best, dist({a.x + t.x, a.y + t.y}, b));
    return best;
  };

  const int K = config.cells * config.users_per_cell;
  detail::Rng rng(config.seed);

  // Uniform drop inside each hexagonal cell by rejection from the
  // bounding square of the circumradius.
  const double circum = isd / s3;
  std::vector<Vec2> user_pos(K);
  std::vector<int> user_cell(K);
  for (int c = 0; c < config.cells; ++c) {
    for (int u = 0; u < config.users_per_cell; ++u) {
      Vec2 local;
      do {
        local = {rng.uniform(-circum, circum), rng.uniform(-circum, circum)};
      } while (!in_hexagon(local, isd));
      const int k = c * config.users_per_cell + u;
      user_pos[k] = {sites[c].x + local.x, sites[c].y + local.y};
      user_cell[k] = c;
    }
  }

  NetworkInstance instance;
  instance.user_count = K;
  instance.gains.resize(static_cast<std::size_t>(K) * K);
  instance.noise_power =
      std::pow(10.0, (config.noise_psd_dbm_hz - 30.0) / 10.0) * config.bandwidth_hz;
  instance.power_cap = dbm_to_watts(config.pmax_dbm);

  for (int j = 0; j < K; ++j) {
    const Vec2 tx = sites[user_cell[j]];  // user j is served from its cell site
    for (int k = 0; k < K; ++k) {
      const double d = wrap_dist(tx, user_pos[k]);
      const double fade = rng.exponential();  // Rayleigh power
      instance.gains[static_cast<std::size_t>(j) * K + k] =
          pathloss_power(d, config.d0_m, config.zeta) * fade;
    }
  }
  instance.validate();
  return instance;
}

namespace {

void check_network_powers(const NetworkInstance& instance, std::span<const double> p) {
  if (p.size() != static_cast<std::size_t>(instance.user_count))
    throw std::invalid_argument("rates: power vector length mismatch");
  const double slack = 1e-9 * instance.power_cap;
  for (double v : p)
    if (!(v >= -slack) || v > instance.power_cap + slack)
      throw std::invalid_argument("rates: powers must lie in [0, pmax]");
}

}  // namespace

std::pair<double, double> signal_interference(const NetworkInstance& instance,
                                              std::span<const double> p, int k) {
  if (k < 0 || k >= instance.user_count)
    throw std::invalid_argument("signal_interference: user index out of range");
  check_network_powers(instance, p);
  const int K = instance.user_count;
  double interference = instance.noise_power;
  for (int j = 0; j < K; ++j)
    if (j != k) interference += p[j] * instance.gain(j, k);
  return {p[k] * instance.gain(k, k), interference};
}

std::vector<double> rates(const NetworkInstance& instance, std::span<const double> p) {
  check_network_powers(instance, p);
  const int K = instance.user_count;
  std::vector<double> r(K);
  for (int k = 0; k < K; ++k) {
    double interference = instance.noise_power;
    for (int j = 0; j < K; ++j)
      if (j != k) interference += p[j] * instance.gain(j, k);
    r[k] = std::log1p(std::max(0.0, p[k]) * instance.gain(k, k) / interference);
  }
  return r;
}

std::vector<double> parallel_rates(const ParallelChannelInstance& instance,
                                   std::span<const double> p) {
  const std::size_t K = instance.noise.size();
  if (p.size() != K) throw std::invalid_argument("parallel_rates: power vector length mismatch");
  double total = 0.0;
  for (double v : p) {
    if (!(v >= -1e-12 * instance.power_budget))
      throw std::invalid_argument("parallel_rates: powers must be nonnegative");
    total += v;
  }
  if (total > instance.power_budget * (1.0 + 1e-9))
    throw std::invalid_argument("parallel_rates: powers exceed the budget");
  std::vector<double> r(K);
  for (std::size_t k = 0; k < K; ++k) r[k] = std::log1p(std::max(0.0, p[k]) / instance.noise[k]);
  return r;
}

std::string to_json(const NetworkInstance& instance) {
  nlohmann::json j;
  j["K"] = instance.user_count;
  j["G"] = instance.gains;
  j["sigma2"] = instance.noise_power;
  j["pmax"] = instance.power_cap;
  return j.dump(2);
}

NetworkInstance instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("instance JSON: ") + e.what());
  }
  for (const char* field : {"K", "G", "sigma2", "pmax"})
    if (!j.contains(field))
      throw std::invalid_argument(std::string("instance JSON: missing field ") + field);
  NetworkInstance instance;
  try {
    instance.user_count = j.at("K").get<int>();
    instance.gains = j.at("G").get<std::vector<double>>();
    instance.noise_power = j.at("sigma2").get<double>();
    instance.power_cap = j.at("pmax").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("instance JSON: ") + e.what());
  }
  instance.validate();
  return instance;
}

}  // namespace slqp
