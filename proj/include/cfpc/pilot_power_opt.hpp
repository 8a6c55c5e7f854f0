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

#ifndef CFPC_PILOT_POWER_OPT_HPP_
#define CFPC_PILOT_POWER_OPT_HPP_

#include <vector>

#include "cfpc/channel_pilots.hpp"
#include "cfpc/config.hpp"
#include "cfpc/types.hpp"

namespace cfpc {

/// Min-max aggregate NMSE over the pilot powers, with the pilot energy left
/// over by the current data powers as the upper bound.
struct PilotOptProblem {
  MatrixXd beta;
  std::vector<ServingSet> serving_sets;
  PilotAssignment assignment;
  double sigma2 = 0.0;
  int tau_p = 1;
  int tau_c = 2;
  double p_max = 0.0;
  double epsilon = 0.0;
  VectorXd p_data_current;

  /// (tau_c p_max - (tau_c - tau_p) p_data_k) / tau_p, raised to epsilon when
  /// it undershoots only by rounding. Throws InfeasibleError otherwise.
  VectorXd upper_bounds() const;
};

struct PilotOptSolution {
  VectorXd p_pilot;
  double nu = 0.0;  ///< true objective at p_pilot
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  ///< true objective after every iterate
  int objective_increases = 0;
  int sweeps = 0;  ///< fixed-point sweeps spent by the exact solver
};

struct PilotSolverOptions {
  double tol = 1e-6;  ///< stop when ||p_i - p_{i-1}||_inf <= tol (watts)
  int max_iters = 100;
  double nu_tol = 1e-6;
  /// Start point of the linearized solver; the exact solver ignores it.
  PilotInit init = PilotInit::kUpperBound;
  PilotMethod method = PilotMethod::kExact;
  /// Gauss-Seidel sweeps per feasibility test of the exact solver.
  int max_sweeps = 10000;
};

/// Every AP serves every user.
std::vector<ServingSet> all_aps_serving(int num_aps, int num_users);
/// The `l` APs with the largest beta_mk serve user k.
std::vector<ServingSet> strongest_aps_serving(const MatrixXd& beta, int l);
/// Serving sets implied by `top_l_aps` in the configuration.
std::vector<ServingSet> serving_sets_for(const MatrixXd& beta, const SimulationConfig& config);

/// sum_{m in A_k} NMSE_mk for every user.
VectorXd aggregate_nmse(const VectorXd& p_pilot, const PilotOptProblem& problem);
/// max_k sum_{m in A_k} NMSE_mk.
double nmse_objective(const VectorXd& p_pilot, const PilotOptProblem& problem);

/// Dispatches on options.method.
PilotOptSolution solve_p3(const PilotOptProblem& problem, const PilotSolverOptions& options = {});

/// Bisection on nu. Each test runs the required-power map (every user's
/// smallest own power meeting nu given the others) from p = epsilon; the map
/// is a standard interference function, so the test is exact and the result
/// is the minimal power vector at the optimal nu. `iterations` counts
/// bisection steps.
PilotOptSolution solve_p3_exact(const PilotOptProblem& problem,
                                const PilotSolverOptions& options = {});

/// Successive linearization: the denominators v_mk = theta_mk are frozen at
/// the previous iterate, which turns every aggregate-NMSE constraint into a
/// linear one in the user's own power. The min-max linear program is solved
/// by bisection on nu, each user then takes the smallest power meeting nu.
/// Returns the iterate with the lowest true objective.
PilotOptSolution solve_p3_linearized(const PilotOptProblem& problem,
                                     const PilotSolverOptions& options = {});

/// Evaluation of the literal auxiliary-variable envelope
///   q <= 1 - z/v + (1 - z),  q >= 1 - z/v + (1 - v)
/// with z = tau_p p_k beta_mk, v = theta_mk, q = NMSE_mk at a given point.
struct EnvelopeDiagnostic {
  int upper_violations = 0;
  int lower_violations = 0;
  double max_violation = 0.0;
};
EnvelopeDiagnostic envelope_diagnostic(const VectorXd& p_pilot, const PilotOptProblem& problem);

}  // namespace cfpc

#endif  // CFPC_PILOT_POWER_OPT_HPP_
