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

#include "cfpc/data_power_opt.hpp"

#include <algorithm>
#include <stdexcept>

namespace cfpc {

VectorXd DataOptProblem::upper_bounds() const {
  const double energy = tau_c * p_max;
  return ((energy - tau_p * p_pilot_hat.array()) / double(tau_c - tau_p)).max(0.0);
}

SinrCoefficients DataOptProblem::coefficients() const {
  return closed_form_coefficients(beta, assignment, p_pilot_hat, sigma2, tau_p, antennas);
}

VectorXd sinr_constraint_residual(double t, const VectorXd& p_data, const DataOptProblem& problem) {
  const SinrCoefficients c = problem.coefficients();
  return c.numerator(p_data) - t * c.denominator(p_data);
}

std::optional<VectorXd> feasible_at(double t, const SinrCoefficients& c, const VectorXd& ub,
                                    const DataSolverOptions& options) {
  const auto K = c.gain.size();
  if (t <= 0.0) return VectorXd::Zero(K);
  if ((c.gain.array() <= 0.0).any()) return std::nullopt;

  const VectorXd scale = t * c.gain.cwiseInverse();
  VectorXd p = VectorXd::Zero(K);
  for (int it = 0; it < options.max_fixed_point_iters; ++it) {
    const VectorXd next = scale.cwiseProduct(c.denominator(p));
    // Standard interference function: iterates only move up from zero.
    if (((next - p).array() < -1e-12 * (1.0 + p.array())).any())
      throw std::logic_error("interference fixed point decreased");
    if (((next - ub).array() > options.tol_p).any()) return std::nullopt;
    const double step = (next - p).lpNorm<Eigen::Infinity>();
    p = next;
    if (step <= options.tol_p) return p.cwiseMin(ub);
  }
  return std::nullopt;
}

std::optional<VectorXd> feasible_at(double t, const DataOptProblem& problem,
                                    const DataSolverOptions& options) {
  return feasible_at(t, problem.coefficients(), problem.upper_bounds(), options);
}

DataOptSolution solve_p5(const DataOptProblem& problem, const DataSolverOptions& options) {
  const SinrCoefficients c = problem.coefficients();
  const VectorXd ub = problem.upper_bounds();
  const auto K = ub.size();

  DataOptSolution out;
  out.p_data = VectorXd::Zero(K);

  const VectorXd solo = c.gain.cwiseProduct(ub).array() /
                        (c.cross.diagonal().cwiseProduct(ub).array() + c.noise);
  const double t_hi = solo.minCoeff();
  if (!(t_hi > 0.0)) return out;

  if (auto p = feasible_at(t_hi, c, ub, options)) {
    out.p_data = *p;
    out.t_star = t_hi;
    return out;
  }

  double lo = 0.0;
  double hi = t_hi;
  VectorXd p_lo = VectorXd::Zero(K);
  while (hi - lo > options.tol_t * hi) {
    const double mid = 0.5 * (lo + hi);
    ++out.bisection_iters;
    if (auto p = feasible_at(mid, c, ub, options)) {
      lo = mid;
      p_lo = std::move(*p);
    } else {
      hi = mid;
    }
  }
  out.p_data = p_lo;
  out.t_star = lo;
  return out;
}

}  // namespace cfpc
