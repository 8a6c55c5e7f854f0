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

#ifndef CFPC_POWER_CONTROL_HPP_
#define CFPC_POWER_CONTROL_HPP_

#include <string>
#include <vector>

#include "cfpc/channel_pilots.hpp"
#include "cfpc/config.hpp"
#include "cfpc/data_power_opt.hpp"
#include "cfpc/pilot_power_opt.hpp"
#include "cfpc/se_statistics.hpp"

namespace cfpc {

/// IPPA: iterative pilot/data allocation. NPPA: full pilot power, max-min
/// data. CPPA: min-max NMSE pilots, maximum data. FPPA: fractional pilots,
/// max-min data.
enum class Scheme { kIppa, kNppa, kCppa, kFppa };

inline constexpr Scheme kAllSchemes[] = {Scheme::kIppa, Scheme::kNppa, Scheme::kCppa,
                                         Scheme::kFppa};

std::string to_string(Scheme scheme);
/// Case-insensitive; throws ConfigError for unknown names.
Scheme parse_scheme(const std::string& name);

struct IterationRecord {
  double delta_data_norm = 0.0;  ///< ||p_d new - p_d old||_2
  double nu = 0.0;               ///< max aggregate NMSE after the pilot step
  double t_star = 0.0;           ///< min SINR after the data step
};

struct DriverResult {
  Scheme scheme = Scheme::kIppa;
  PowerState power_state;
  SEReport se_report;
  int outer_iterations = 0;
  bool converged = false;
  std::vector<IterationRecord> trace;
};

/// Per-block energy tau_c p_max minus what the user spends, minimised over
/// users. Negative means the joint budget is violated.
double budget_slack(const PowerState& state, const SimulationConfig& config);

/// Pilot/data powers of the baseline energy split.
double split_pilot_power(const SimulationConfig& config);
double split_data_power(const SimulationConfig& config);

/// Closed-form SINR and SE of a power state; the single evaluation path every
/// scheme reports through.
SEReport evaluate(const MatrixXd& beta, const PilotAssignment& assignment, const PowerState& state,
                  const SimulationConfig& config);

DriverResult run_ippa(const MatrixXd& beta, const PilotAssignment& assignment,
                      const SimulationConfig& config, const std::vector<ServingSet>& serving_sets);
DriverResult run_nppa(const MatrixXd& beta, const PilotAssignment& assignment,
                      const SimulationConfig& config);
DriverResult run_cppa(const MatrixXd& beta, const PilotAssignment& assignment,
                      const SimulationConfig& config, const std::vector<ServingSet>& serving_sets);
DriverResult run_fppa(const MatrixXd& beta, const PilotAssignment& assignment,
                      const SimulationConfig& config, double theta_exp);

DriverResult run_scheme(Scheme scheme, const MatrixXd& beta, const PilotAssignment& assignment,
                        const SimulationConfig& config, const std::vector<ServingSet>& serving_sets);

}  // namespace cfpc

#endif  // CFPC_POWER_CONTROL_HPP_
