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


#include <cstdio>
#include <fstream>

#include "cfpc/config.hpp"
#include "cfpc/types.hpp"
#include "doctest.h"

using cfpc::ConfigError;
using cfpc::SimulationConfig;
using nlohmann::json;

TEST_CASE("defaults describe the 100 AP, 40 user desk setup") {
  const SimulationConfig c;
  CHECK(c.num_aps == 100);
  CHECK(c.num_users == 40);
  CHECK(c.tau_c == 200);
  CHECK(c.tau_p == 5);
  CHECK(c.p_max_w == doctest::Approx(0.1));
  CHECK(c.energy_budget() == doctest::Approx(20.0));
  CHECK(c.data_symbols() == 195);
  CHECK(c.pilot_energy_fraction() == doctest::Approx(0.5));
  CHECK(c.ippa_init == cfpc::IppaInit::kEpsilonPilot);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("json round trip keeps every field") {
  SimulationConfig c;
  c.num_aps = 25;
  c.antennas_per_ap = 4;
  c.fixed_topology = true;
  c.tau_p = 10;
  c.split_ratio = 0.25;
  c.noise_stat = cfpc::NoiseStat::kChannelBased;
  c.pilot_method = cfpc::PilotMethod::kLinearized;
  c.top_l_aps = 5;
  c.rng_seed = 1234567890123ULL;
  const SimulationConfig back = cfpc::config_from_json(cfpc::config_to_json(c));
  CHECK(cfpc::config_to_json(back) == cfpc::config_to_json(c));
  CHECK(back.rng_seed == c.rng_seed);
  CHECK(back.num_aps == 25);
  CHECK(back.noise_stat == cfpc::NoiseStat::kChannelBased);
}

TEST_CASE("missing keys keep their defaults") {
  const SimulationConfig c = cfpc::config_from_json(json::parse(R"({"network": {"num_aps": 7}})"));
  CHECK(c.num_aps == 7);
  CHECK(c.num_users == 40);
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(cfpc::config_from_json(json::parse(R"({"networks": {}})")), ConfigError);
  CHECK_THROWS_AS(cfpc::config_from_json(json::parse(R"({"network": {"num_ap": 3}})")),
                  ConfigError);
}

TEST_CASE("type mismatches and bad enum strings are config errors") {
  CHECK_THROWS_AS(cfpc::config_from_json(json::parse(R"({"network": {"num_aps": "x"}})")),
                  ConfigError);
  CHECK_THROWS_AS(
      cfpc::config_from_json(json::parse(R"({"algorithm": {"noise_stat": "neither"}})")),
      ConfigError);
  CHECK_THROWS_AS(cfpc::config_from_json(json::parse(R"({"algorithm": {"ippa_init": "x"}})")),
                  ConfigError);
}

TEST_CASE("invariants are enforced") {
  SimulationConfig c;
  c.tau_p = 200;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimulationConfig{};
  c.d0_m = 60.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimulationConfig{};
  c.epsilon_w = 5.0;  // 5 * 5 > 200 * 0.1
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimulationConfig{};
  c.split_ratio = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimulationConfig{};
  c.top_l_aps = 101;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("load_config reads files with comments and reports missing files") {
  const std::string path = "cfpc_test_config.json";
  {
    std::ofstream out(path);
    out << "// desk setup\n{\"frame\": {\"tau_p\": 10}, \"rng_seed\": 9}\n";
  }
  const SimulationConfig c = cfpc::load_config(path);
  CHECK(c.tau_p == 10);
  CHECK(c.rng_seed == 9);
  std::remove(path.c_str());
  CHECK_THROWS_AS(cfpc::load_config("does/not/exist.json"), ConfigError);
}
