// Copyright 2026 The cfpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFPC_CONFIG_HPP_
#define CFPC_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "json.hpp"

namespace cfpc {

/// Which expression is used for the noise statistic F_k of the UatF SINR.
enum class NoiseStat {
  kEstimateBased,  ///< sigma^2 * E{||g_hat_mk||^2}
  kChannelBased,   ///< sigma^2 * E{||g_mk||^2} = sigma^2 N beta_mk
};

/// Starting point of the IPPA outer loop.
enum class IppaInit {
  kEpsilonPilot,  ///< p_pilot = epsilon, p_data = budget remainder
  kSplit,         ///< baseline energy split (see SimulationConfig::pilot_energy_fraction)
};

/// Starting point of the successive-linearization pilot solver.
enum class PilotInit { kUpperBound, kEpsilon };

/// Pilot solver: exact bisection with interference fixed points, or
/// successive linearization with frozen theta.
enum class PilotMethod { kExact, kLinearized };

struct SimulationConfig {
  // network
  int num_aps = 100;
  int antennas_per_ap = 1;
  int num_users = 40;
  double area_side_km = 1.0;
  bool fixed_topology = false;

  // coherence block
  int tau_c = 200;
  int tau_p = 5;

  // propagation
  double carrier_freq_mhz = 1900.0;
  double ap_height_m = 15.0;
  double ue_height_m = 1.65;
  double shadow_std_db = 8.0;
  double d0_m = 10.0;
  double d1_m = 50.0;

  // receiver noise
  double bandwidth_hz = 20e6;
  double noise_figure_db = 9.0;
  double noise_temp_k = 290.0;

  // power
  double p_max_w = 0.1;
  double epsilon_w = 0.01;
  /// Fraction of the per-block energy tau_c * p_max that the baselines put
  /// into pilots. tau_p / tau_c puts both phases at p_max.
  double split_ratio = 0.5;

  // algorithm
  double zeta = 1e-4;
  int max_outer_iters = 20;
  IppaInit ippa_init = IppaInit::kEpsilonPilot;
  PilotInit pilot_init = PilotInit::kUpperBound;
  PilotMethod pilot_method = PilotMethod::kExact;
  double pilot_tol_w = 1e-6;
  int pilot_max_iters = 100;
  double data_tol_t = 1e-5;
  double data_tol_p_w = 1e-9;
  int data_max_fixed_point_iters = 10000;
  /// 0 = every AP serves every user, otherwise the L strongest APs.
  int top_l_aps = 0;
  NoiseStat noise_stat = NoiseStat::kEstimateBased;
  double fppa_exponent = -0.5;

  std::uint64_t rng_seed = 1;

  /// Per-block energy budget tau_c * p_max.
  double energy_budget() const { return tau_c * p_max_w; }
  int data_symbols() const { return tau_c - tau_p; }
  double pilot_energy_fraction() const;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
};

/// Parses a configuration document. Every key must be known; missing keys keep
/// their defaults. The result is validated.
SimulationConfig config_from_json(const nlohmann::json& doc);
SimulationConfig load_config(const std::string& path);
nlohmann::json config_to_json(const SimulationConfig& config);

std::string to_string(NoiseStat stat);
std::string to_string(IppaInit init);
std::string to_string(PilotInit init);
std::string to_string(PilotMethod method);

}  // namespace cfpc

#endif  // CFPC_CONFIG_HPP_
