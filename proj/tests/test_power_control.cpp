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


#include "cfpc/experiment.hpp"
#include "cfpc/power_control.hpp"
#include "doctest.h"

using namespace cfpc;

namespace {

SimulationConfig small_config() {
  SimulationConfig c;
  c.num_aps = 12;
  c.num_users = 6;
  c.tau_p = 2;
  c.tau_c = 40;
  c.rng_seed = 11;
  return c;
}

}  // namespace

TEST_CASE("scheme names") {
  for (Scheme s : kAllSchemes) CHECK(parse_scheme(to_string(s)) == s);
  CHECK(parse_scheme("ippa") == Scheme::kIppa);
  CHECK(parse_scheme("Fppa") == Scheme::kFppa);
  CHECK_THROWS_AS(parse_scheme("xppa"), ConfigError);
}

TEST_CASE("budget slack and the baseline split") {
  SimulationConfig c = small_config();
  const PowerState st{(VectorXd(2) << 0.5, 1.0).finished(), (VectorXd(2) << 0.05, 0.04).finished()};
  CHECK(budget_slack(st, c) == doctest::Approx(4.0 - 2 * 1.0 - 38 * 0.04));
  for (double r : {0.025, 0.05, 0.5, 0.9}) {
    c.split_ratio = r;
    const double used = c.tau_p * split_pilot_power(c) + c.data_symbols() * split_data_power(c);
    CHECK(used == doctest::Approx(c.energy_budget()));
    CHECK(split_pilot_power(c) == doctest::Approx(r * c.energy_budget() / c.tau_p));
  }
  c.split_ratio = double(c.tau_p) / c.tau_c;
  CHECK(split_pilot_power(c) == doctest::Approx(c.p_max_w));
  CHECK(split_data_power(c) == doctest::Approx(c.p_max_w));
}

TEST_CASE("every scheme respects the joint energy budget") {
  const SimulationConfig c = small_config();
  for (int r = 0; r < 3; ++r) {
    const Scenario s = draw_scenario(c, r);
    const auto serving = serving_sets_for(s.fading.beta, c);
    for (Scheme scheme : kAllSchemes) {
      const DriverResult d = run_scheme(scheme, s.fading.beta, s.assignment, c, serving);
      CAPTURE(to_string(scheme));
      CHECK(d.scheme == scheme);
      CHECK(budget_slack(d.power_state, c) >= -1e-9);
      CHECK((d.power_state.p_data.array() >= 0).all());
      CHECK((d.power_state.p_pilot.array() > 0).all());
      const SEReport again = evaluate(s.fading.beta, s.assignment, d.power_state, c);
      CHECK(again.se.isApprox(d.se_report.se));
      CHECK((d.se_report.se.array() >= 0).all());
      CHECK_FALSE(d.trace.empty());
    }
  }
}

TEST_CASE("baseline pilot rules") {
  SimulationConfig c = small_config();
  const Scenario s = draw_scenario(c, 0);
  const auto serving = serving_sets_for(s.fading.beta, c);
  const DriverResult n = run_nppa(s.fading.beta, s.assignment, c);
  CHECK((n.power_state.p_pilot.array() == split_pilot_power(c)).all());

  const DriverResult cp = run_cppa(s.fading.beta, s.assignment, c, serving);
  const VectorXd ub =
      ((c.energy_budget() - c.tau_p * cp.power_state.p_pilot.array()) / c.data_symbols()).matrix();
  CHECK(cp.power_state.p_data.isApprox(ub));
  CHECK((cp.power_state.p_pilot.array() >= c.epsilon_w - 1e-12).all());

  // Exponent zero gives every user the full split pilot power, i.e. NPPA.
  const DriverResult f0 = run_fppa(s.fading.beta, s.assignment, c, 0.0);
  CHECK(f0.power_state.p_pilot.isApprox(n.power_state.p_pilot));
  CHECK(f0.se_report.se.isApprox(n.se_report.se));

  const DriverResult f = run_fppa(s.fading.beta, s.assignment, c, -0.5);
  CHECK(f.power_state.p_pilot.maxCoeff() == doctest::Approx(split_pilot_power(c)));
  const VectorXd total = s.fading.beta.colwise().sum().transpose();
  Eigen::Index weakest = 0;
  total.minCoeff(&weakest);
  CHECK(f.power_state.p_pilot(weakest) == doctest::Approx(split_pilot_power(c)));
  CHECK_THROWS_AS(run_fppa(s.fading.beta, s.assignment, c, 0.5), std::invalid_argument);
}

TEST_CASE("IPPA trace and stopping rule") {
  SimulationConfig c = small_config();
  const Scenario s = draw_scenario(c, 1);
  const auto serving = serving_sets_for(s.fading.beta, c);
  for (IppaInit init : {IppaInit::kEpsilonPilot, IppaInit::kSplit}) {
    c.ippa_init = init;
    const DriverResult r = run_ippa(s.fading.beta, s.assignment, c, serving);
    CHECK(int(r.trace.size()) == r.outer_iterations);
    CHECK(r.outer_iterations <= c.max_outer_iters);
    if (r.converged) CHECK(r.trace.back().delta_data_norm <= c.zeta);
    else CHECK(r.outer_iterations == c.max_outer_iters);
    CHECK(r.trace.back().t_star == doctest::Approx(r.se_report.sinr.minCoeff()).epsilon(1e-3));
  }
  c.max_outer_iters = 1;
  const DriverResult one = run_ippa(s.fading.beta, s.assignment, c, serving);
  CHECK(one.outer_iterations == 1);
}

TEST_CASE("IPPA is no worse than its first data step") {
  SimulationConfig c = small_config();
  const Scenario s = draw_scenario(c, 2);
  const auto serving = serving_sets_for(s.fading.beta, c);
  const DriverResult r = run_ippa(s.fading.beta, s.assignment, c, serving);
  CHECK(r.trace.back().t_star > 0.0);
  for (const IterationRecord& it : r.trace) CHECK(it.nu > 0.0);
}
