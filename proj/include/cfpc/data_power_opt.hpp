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

#ifndef CFPC_DATA_POWER_OPT_HPP_
#define CFPC_DATA_POWER_OPT_HPP_

#include <optional>

#include "cfpc/channel_pilots.hpp"
#include "cfpc/se_statistics.hpp"
#include "cfpc/types.hpp"

namespace cfpc {

/// Max-min closed-form SINR over the data powers for fixed pilot powers.
struct DataOptProblem {
  MatrixXd beta;
  PilotAssignment assignment;
  VectorXd p_pilot_hat;
  double sigma2 = 0.0;
  int tau_p = 1;
  int tau_c = 2;
  double p_max = 0.0;
  int antennas = 1;

  /// (tau_c p_max - tau_p p_pilot_k) / (tau_c - tau_p), floored at zero.
  VectorXd upper_bounds() const;
  SinrCoefficients coefficients() const;
};

struct DataOptSolution {
  VectorXd p_data;
  double t_star = 0.0;
  int bisection_iters = 0;
};

struct DataSolverOptions {
  double tol_t = 1e-5;  ///< relative width of the final bisection bracket
  double tol_p = 1e-9;  ///< watts
  int max_fixed_point_iters = 10000;
};

/// No_k(p) - t De_k(p); non-negative exactly when SINR_k >= t.
VectorXd sinr_constraint_residual(double t, const VectorXd& p_data, const DataOptProblem& problem);

/// Minimal power vector with every SINR_k >= t inside [0, ub], found by the
/// fixed point p <- t De(p) / gain from p = 0, or nullopt when the iterate
/// leaves the box or fails to settle.
std::optional<VectorXd> feasible_at(double t, const DataOptProblem& problem,
                                    const DataSolverOptions& options = {});
std::optional<VectorXd> feasible_at(double t, const SinrCoefficients& coefficients,
                                    const VectorXd& upper_bounds,
                                    const DataSolverOptions& options = {});

/// Bisection on the common SINR target t over [0, t_hi], where t_hi is the
/// smallest single-user SINR at full power with no other transmitters.
DataOptSolution solve_p5(const DataOptProblem& problem, const DataSolverOptions& options = {});

}  // namespace cfpc

#endif  // CFPC_DATA_POWER_OPT_HPP_
