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

#include "cfpc/power_control.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "cfpc/log.hpp"
#include "cfpc/network_model.hpp"

namespace cfpc {

namespace {

PilotOptProblem pilot_problem(const MatrixXd& beta, const PilotAssignment& assignment,
                              const SimulationConfig& config,
                              const std::vector<ServingSet>& serving_sets,
                              const VectorXd& p_data) {
  PilotOptProblem p;
  p.beta = beta;
  p.serving_sets = serving_sets;
  p.assignment = assignment;
  p.sigma2 = noise_power_w(config);
  p.tau_p = config.tau_p;
  p.tau_c = config.tau_c;
  p.p_max = config.p_max_w;
  p.epsilon = config.epsilon_w;
  p.p_data_current = p_data;
  return p;
}

PilotSolverOptions pilot_options(const SimulationConfig& config) {
  PilotSolverOptions o;
  o.tol = config.pilot_tol_w;
  o.max_iters = config.pilot_max_iters;
  o.init = config.pilot_init;
  o.method = config.pilot_method;
  return o;
}

DataOptProblem data_problem(const MatrixXd& beta, const PilotAssignment& assignment,
                            const SimulationConfig& config, const VectorXd& p_pilot) {
  DataOptProblem d;
  d.beta = beta;
  d.assignment = assignment;
  d.p_pilot_hat = p_pilot;
  d.sigma2 = noise_power_w(config);
  d.tau_p = config.tau_p;
  d.tau_c = config.tau_c;
  d.p_max = config.p_max_w;
  d.antennas = config.antennas_per_ap;
  return d;
}

DataSolverOptions data_options(const SimulationConfig& config) {
  DataSolverOptions o;
  o.tol_t = config.data_tol_t;
  o.tol_p = config.data_tol_p_w;
  o.max_fixed_point_iters = config.data_max_fixed_point_iters;
  return o;
}

// Max-min data step shared by NPPA and FPPA.
DriverResult finish_with_max_min(Scheme scheme, const MatrixXd& beta,
                                 const PilotAssignment& assignment, const SimulationConfig& config,
                                 const VectorXd& p_pilot) {
  const DataOptSolution data =
      solve_p5(data_problem(beta, assignment, config, p_pilot), data_options(config));
  DriverResult r;
  r.scheme = scheme;
  r.power_state = {p_pilot, data.p_data};
  r.se_report = evaluate(beta, assignment, r.power_state, config);
  r.outer_iterations = 1;
  r.converged = true;
  const auto serving = serving_sets_for(beta, config);
  r.trace.push_back({0.0,
                     nmse_objective(p_pilot, pilot_problem(beta, assignment, config, serving,
                                                           data.p_data)),
                     data.t_star});
  return r;
}

}  // namespace

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kIppa: return "IPPA";
    case Scheme::kNppa: return "NPPA";
    case Scheme::kCppa: return "CPPA";
    case Scheme::kFppa: return "FPPA";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Scheme s : kAllSchemes)
    if (to_string(s) == upper) return s;
  throw ConfigError("unknown scheme '" + name + "'");
}

double budget_slack(const PowerState& state, const SimulationConfig& config) {
  const double energy = config.energy_budget();
  return (energy - config.tau_p * state.p_pilot.array() -
          config.data_symbols() * state.p_data.array())
      .minCoeff();
}

double split_pilot_power(const SimulationConfig& config) {
  return config.pilot_energy_fraction() * config.energy_budget() / config.tau_p;
}

double split_data_power(const SimulationConfig& config) {
  return (1.0 - config.pilot_energy_fraction()) * config.energy_budget() / config.data_symbols();
}

SEReport evaluate(const MatrixXd& beta, const PilotAssignment& assignment, const PowerState& state,
                  const SimulationConfig& config) {
  const VectorXd sinr = sinr_closed_form(beta, assignment, state, noise_power_w(config),
                                         config.tau_p, config.antennas_per_ap);
  return spectral_efficiency(sinr, config.tau_p, config.tau_c);
}

DriverResult run_ippa(const MatrixXd& beta, const PilotAssignment& assignment,
                      const SimulationConfig& config, const std::vector<ServingSet>& serving_sets) {
  const auto K = beta.cols();
  VectorXd p_data =
      config.ippa_init == IppaInit::kEpsilonPilot
          ? VectorXd::Constant(K, (config.energy_budget() - config.tau_p * config.epsilon_w) /
                                      config.data_symbols())
          : VectorXd::Constant(K, split_data_power(config));
  VectorXd p_pilot = VectorXd::Constant(K, config.epsilon_w);

  DriverResult r;
  r.scheme = Scheme::kIppa;
  const PilotSolverOptions p_opts = pilot_options(config);
  const DataSolverOptions d_opts = data_options(config);

  for (int it = 1; it <= config.max_outer_iters; ++it) {
    const PilotOptSolution pilot = solve_p3(
        pilot_problem(beta, assignment, config, serving_sets, p_data), p_opts);
    if (!pilot.converged)
      log_debug("IPPA outer iteration " + std::to_string(it) + ": pilot step did not converge");
    p_pilot = pilot.p_pilot;

    const DataOptSolution data = solve_p5(data_problem(beta, assignment, config, p_pilot), d_opts);
    const double delta = (data.p_data - p_data).norm();
    p_data = data.p_data;
    r.trace.push_back({delta, pilot.nu, data.t_star});
    r.outer_iterations = it;
    if (delta <= config.zeta) {
      r.converged = true;
      break;
    }
  }

  r.power_state = {p_pilot, p_data};
  r.se_report = evaluate(beta, assignment, r.power_state, config);
  return r;
}

DriverResult run_nppa(const MatrixXd& beta, const PilotAssignment& assignment,
                      const SimulationConfig& config) {
  const VectorXd p_pilot = VectorXd::Constant(beta.cols(), split_pilot_power(config));
  return finish_with_max_min(Scheme::kNppa, beta, assignment, config, p_pilot);
}

DriverResult run_cppa(const MatrixXd& beta, const PilotAssignment& assignment,
                      const SimulationConfig& config, const std::vector<ServingSet>& serving_sets) {
  const auto K = beta.cols();
  const VectorXd p_data_split = VectorXd::Constant(K, split_data_power(config));
  const PilotOptSolution pilot = solve_p3(
      pilot_problem(beta, assignment, config, serving_sets, p_data_split), pilot_options(config));

  DataOptProblem data = data_problem(beta, assignment, config, pilot.p_pilot);
  DriverResult r;
  r.scheme = Scheme::kCppa;
  r.power_state = {pilot.p_pilot, data.upper_bounds()};
  r.se_report = evaluate(beta, assignment, r.power_state, config);
  r.outer_iterations = 1;
  r.converged = true;
  r.trace.push_back({0.0, pilot.nu, r.se_report.sinr.minCoeff()});
  return r;
}

DriverResult run_fppa(const MatrixXd& beta, const PilotAssignment& assignment,
                      const SimulationConfig& config, double theta_exp) {
  if (theta_exp < -1.0 || theta_exp > 0.0)
    throw std::invalid_argument("FPPA exponent must lie in [-1, 0]");
  const VectorXd weight = beta.colwise().sum().transpose().array().pow(theta_exp);
  const VectorXd p_pilot = split_pilot_power(config) * weight / weight.maxCoeff();
  return finish_with_max_min(Scheme::kFppa, beta, assignment, config, p_pilot);
}

DriverResult run_scheme(Scheme scheme, const MatrixXd& beta, const PilotAssignment& assignment,
                        const SimulationConfig& config, const std::vector<ServingSet>& serving_sets) {
  switch (scheme) {
    case Scheme::kIppa: return run_ippa(beta, assignment, config, serving_sets);
    case Scheme::kNppa: return run_nppa(beta, assignment, config);
    case Scheme::kCppa: return run_cppa(beta, assignment, config, serving_sets);
    case Scheme::kFppa: return run_fppa(beta, assignment, config, config.fppa_exponent);
  }
  throw std::logic_error("unhandled scheme");
}

}  // namespace cfpc
