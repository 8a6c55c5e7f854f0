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

#include "cfpc/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cfpc/types.hpp"

namespace cfpc {

namespace {

using json = nlohmann::json;
using Setter = std::function<void(SimulationConfig&, const json&)>;

template <typename T>
T as(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

NoiseStat parse_noise_stat(const std::string& s) {
  if (s == "estimate_based") return NoiseStat::kEstimateBased;
  if (s == "channel_based") return NoiseStat::kChannelBased;
  throw ConfigError("noise_stat must be estimate_based or channel_based, got '" + s + "'");
}

IppaInit parse_ippa_init(const std::string& s) {
  if (s == "epsilon") return IppaInit::kEpsilonPilot;
  if (s == "split") return IppaInit::kSplit;
  throw ConfigError("ippa_init must be epsilon or split, got '" + s + "'");
}

PilotInit parse_pilot_init(const std::string& s) {
  if (s == "upper_bound") return PilotInit::kUpperBound;
  if (s == "epsilon") return PilotInit::kEpsilon;
  throw ConfigError("pilot_init must be upper_bound or epsilon, got '" + s + "'");
}

PilotMethod parse_pilot_method(const std::string& s) {
  if (s == "exact") return PilotMethod::kExact;
  if (s == "linearized") return PilotMethod::kLinearized;
  throw ConfigError("pilot_method must be exact or linearized, got '" + s + "'");
}

#define CFPC_FIELD(name, type) \
  {#name, [](SimulationConfig& c, const json& v) { c.name = as<type>(v, #name); }}

const std::map<std::string, std::map<std::string, Setter>>& sections() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"network",
       {
           CFPC_FIELD(num_aps, int),
           CFPC_FIELD(antennas_per_ap, int),
           CFPC_FIELD(num_users, int),
           CFPC_FIELD(area_side_km, double),
           CFPC_FIELD(fixed_topology, bool),
       }},
      {"frame",
       {
           CFPC_FIELD(tau_c, int),
           CFPC_FIELD(tau_p, int),
       }},
      {"propagation",
       {
           CFPC_FIELD(carrier_freq_mhz, double),
           CFPC_FIELD(ap_height_m, double),
           CFPC_FIELD(ue_height_m, double),
           CFPC_FIELD(shadow_std_db, double),
           CFPC_FIELD(d0_m, double),
           CFPC_FIELD(d1_m, double),
       }},
      {"noise",
       {
           CFPC_FIELD(bandwidth_hz, double),
           CFPC_FIELD(noise_figure_db, double),
           CFPC_FIELD(noise_temp_k, double),
       }},
      {"power",
       {
           CFPC_FIELD(p_max_w, double),
           CFPC_FIELD(epsilon_w, double),
           CFPC_FIELD(split_ratio, double),
       }},
      {"algorithm",
       {
           CFPC_FIELD(zeta, double),
           CFPC_FIELD(max_outer_iters, int),
           {"ippa_init",
            [](SimulationConfig& c, const json& v) {
              c.ippa_init = parse_ippa_init(as<std::string>(v, "ippa_init"));
            }},
           {"pilot_init",
            [](SimulationConfig& c, const json& v) {
              c.pilot_init = parse_pilot_init(as<std::string>(v, "pilot_init"));
            }},
           {"pilot_method",
            [](SimulationConfig& c, const json& v) {
              c.pilot_method = parse_pilot_method(as<std::string>(v, "pilot_method"));
            }},
           CFPC_FIELD(pilot_tol_w, double),
           CFPC_FIELD(pilot_max_iters, int),
           CFPC_FIELD(data_tol_t, double),
           CFPC_FIELD(data_tol_p_w, double),
           CFPC_FIELD(data_max_fixed_point_iters, int),
           CFPC_FIELD(top_l_aps, int),
           {"noise_stat",
            [](SimulationConfig& c, const json& v) {
              c.noise_stat = parse_noise_stat(as<std::string>(v, "noise_stat"));
            }},
           CFPC_FIELD(fppa_exponent, double),
       }},
  };
  return table;
}

#undef CFPC_FIELD

}  // namespace

double SimulationConfig::pilot_energy_fraction() const {
  return split_ratio;
}

void SimulationConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(num_aps > 0, "num_aps must be positive");
  require(antennas_per_ap > 0, "antennas_per_ap must be positive");
  require(num_users > 0, "num_users must be positive");
  require(area_side_km > 0, "area_side_km must be positive");
  require(tau_c > 0 && tau_p > 0, "tau_c and tau_p must be positive");
  require(tau_p < tau_c, "tau_p must be smaller than tau_c");
  require(carrier_freq_mhz > 0 && ap_height_m > 0 && ue_height_m > 0,
          "carrier frequency and antenna heights must be positive");
  require(shadow_std_db >= 0, "shadow_std_db must be non-negative");
  require(d0_m > 0 && d0_m < d1_m, "need 0 < d0_m < d1_m");
  require(bandwidth_hz > 0 && noise_temp_k > 0, "bandwidth and noise temperature must be positive");
  require(p_max_w > 0 && epsilon_w > 0, "p_max_w and epsilon_w must be positive");
  require(epsilon_w * tau_p <= tau_c * p_max_w, "epsilon_w * tau_p exceeds the energy budget");
  const double frac = pilot_energy_fraction();
  require(frac > 0 && frac < 1, "split_ratio must lie in (0, 1)");
  require(zeta > 0, "zeta must be positive");
  require(max_outer_iters > 0, "max_outer_iters must be positive");
  require(pilot_tol_w > 0 && pilot_max_iters > 0, "pilot solver tolerances must be positive");
  require(data_tol_t > 0 && data_tol_p_w > 0 && data_max_fixed_point_iters > 0,
          "data solver tolerances must be positive");
  require(top_l_aps >= 0 && top_l_aps <= num_aps, "top_l_aps must lie in [0, num_aps]");
  require(fppa_exponent >= -1.0 && fppa_exponent <= 0.0, "fppa_exponent must lie in [-1, 0]");
}

SimulationConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration root must be an object");
  SimulationConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "rng_seed") {
      config.rng_seed = as<std::uint64_t>(value, key);
      continue;
    }
    const auto section = sections().find(key);
    if (section == sections().end()) throw ConfigError("unknown configuration key '" + key + "'");
    if (!value.is_object()) throw ConfigError("section '" + key + "' must be an object");
    for (const auto& [field, field_value] : value.items()) {
      const auto setter = section->second.find(field);
      if (setter == section->second.end())
        throw ConfigError("unknown configuration key '" + key + "." + field + "'");
      setter->second(config, field_value);
    }
  }
  config.validate();
  return config;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const SimulationConfig& c) {
  json doc;
  doc["network"] = {{"num_aps", c.num_aps},
                    {"antennas_per_ap", c.antennas_per_ap},
                    {"num_users", c.num_users},
                    {"area_side_km", c.area_side_km},
                    {"fixed_topology", c.fixed_topology}};
  doc["frame"] = {{"tau_c", c.tau_c}, {"tau_p", c.tau_p}};
  doc["propagation"] = {{"carrier_freq_mhz", c.carrier_freq_mhz}, {"ap_height_m", c.ap_height_m},
                        {"ue_height_m", c.ue_height_m},           {"shadow_std_db", c.shadow_std_db},
                        {"d0_m", c.d0_m},                         {"d1_m", c.d1_m}};
  doc["noise"] = {{"bandwidth_hz", c.bandwidth_hz},
                  {"noise_figure_db", c.noise_figure_db},
                  {"noise_temp_k", c.noise_temp_k}};
  doc["power"] = {
      {"p_max_w", c.p_max_w}, {"epsilon_w", c.epsilon_w}, {"split_ratio", c.split_ratio}};
  doc["algorithm"] = {{"zeta", c.zeta},
                      {"max_outer_iters", c.max_outer_iters},
                      {"ippa_init", to_string(c.ippa_init)},
                      {"pilot_init", to_string(c.pilot_init)},
                      {"pilot_method", to_string(c.pilot_method)},
                      {"pilot_tol_w", c.pilot_tol_w},
                      {"pilot_max_iters", c.pilot_max_iters},
                      {"data_tol_t", c.data_tol_t},
                      {"data_tol_p_w", c.data_tol_p_w},
                      {"data_max_fixed_point_iters", c.data_max_fixed_point_iters},
                      {"top_l_aps", c.top_l_aps},
                      {"noise_stat", to_string(c.noise_stat)},
                      {"fppa_exponent", c.fppa_exponent}};
  doc["rng_seed"] = c.rng_seed;
  return doc;
}

std::string to_string(NoiseStat stat) {
  return stat == NoiseStat::kEstimateBased ? "estimate_based" : "channel_based";
}

std::string to_string(IppaInit init) {
  return init == IppaInit::kEpsilonPilot ? "epsilon" : "split";
}

std::string to_string(PilotInit init) {
  return init == PilotInit::kUpperBound ? "upper_bound" : "epsilon";
}

std::string to_string(PilotMethod method) {
  return method == PilotMethod::kExact ? "exact" : "linearized";
}

}  // namespace cfpc
