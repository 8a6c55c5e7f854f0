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

#include "cfpc/pilot_power_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "cfpc/log.hpp"

namespace cfpc {

VectorXd PilotOptProblem::upper_bounds() const {
  const double energy = tau_c * p_max;
  VectorXd ub = (energy - (tau_c - tau_p) * p_data_current.array()) / double(tau_p);
  const double slack = 1e-12 * std::max(1.0, energy);
  for (Eigen::Index k = 0; k < ub.size(); ++k) {
    if (ub(k) < epsilon - slack) {
      std::ostringstream msg;
      msg << "pilot upper bound " << ub(k) << " W of user " << k << " is below epsilon "
          << epsilon << " W";
      throw InfeasibleError(msg.str());
    }
    ub(k) = std::max(ub(k), epsilon);
  }
  return ub;
}

std::vector<ServingSet> all_aps_serving(int num_aps, int num_users) {
  ServingSet all(static_cast<std::size_t>(num_aps));
  std::iota(all.begin(), all.end(), 0);
  return std::vector<ServingSet>(static_cast<std::size_t>(num_users), all);
}

std::vector<ServingSet> strongest_aps_serving(const MatrixXd& beta, int l) {
  const auto M = static_cast<int>(beta.rows());
  std::vector<ServingSet> sets(static_cast<std::size_t>(beta.cols()));
  for (Eigen::Index k = 0; k < beta.cols(); ++k) {
    ServingSet order(static_cast<std::size_t>(M));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return beta(a, k) > beta(b, k); });
    order.resize(static_cast<std::size_t>(std::min(l, M)));
    std::sort(order.begin(), order.end());
    sets[k] = std::move(order);
  }
  return sets;
}

std::vector<ServingSet> serving_sets_for(const MatrixXd& beta, const SimulationConfig& config) {
  if (config.top_l_aps > 0) return strongest_aps_serving(beta, config.top_l_aps);
  return all_aps_serving(static_cast<int>(beta.rows()), static_cast<int>(beta.cols()));
}

VectorXd aggregate_nmse(const VectorXd& p_pilot, const PilotOptProblem& problem) {
  const MatrixXd q =
      nmse(problem.beta, p_pilot, problem.assignment, problem.sigma2, problem.tau_p);
  VectorXd total = VectorXd::Zero(q.cols());
  for (Eigen::Index k = 0; k < q.cols(); ++k)
    for (int m : problem.serving_sets[k]) total(k) += q(m, k);
  return total;
}

double nmse_objective(const VectorXd& p_pilot, const PilotOptProblem& problem) {
  return aggregate_nmse(p_pilot, problem).maxCoeff();
}

namespace {

// One linearized min-max step at frozen denominators. The linearized
// aggregate NMSE of user k at own power x is |A_k| - tau_p x s_k.
VectorXd linearized_step(const VectorXd& p_prev, const VectorXd& ub, const PilotOptProblem& problem,
                         const PilotSolverOptions& options) {
  const auto K = p_prev.size();
  const MatrixXd frozen =
      theta(problem.beta, p_prev, problem.assignment, problem.sigma2, problem.tau_p);
  VectorXd s(K);
  VectorXd count(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    double acc = 0.0;
    for (int m : problem.serving_sets[k]) acc += problem.beta(m, k) / frozen(m, k);
    s(k) = acc;
    count(k) = double(problem.serving_sets[k].size());
  }

  // Feasibility of nu only needs the best case of every user, i.e. x = ub.
  const VectorXd best_case = count.array() - problem.tau_p * ub.array() * s.array();
  auto feasible = [&](double nu) { return (best_case.array() <= nu).all(); };

  double lo = 0.0;
  double hi = count.sum();
  if (feasible(lo)) {
    hi = lo;
  } else {
    while (hi - lo > options.nu_tol) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? hi : lo) = mid;
    }
  }

  VectorXd p(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double needed = (count(k) - hi) / (problem.tau_p * std::max(s(k), kDenominatorFloor));
    p(k) = std::clamp(needed, problem.epsilon, ub(k));
  }
  return p;
}

}  // namespace

PilotOptSolution solve_p3_linearized(const PilotOptProblem& problem,
                                     const PilotSolverOptions& options) {
  const VectorXd ub = problem.upper_bounds();
  VectorXd p = options.init == PilotInit::kUpperBound
                   ? ub
                   : VectorXd::Constant(ub.size(), problem.epsilon);

  PilotOptSolution best;
  best.p_pilot = p;
  best.nu = nmse_objective(p, problem);

  PilotOptSolution out;
  out.objective_trace.push_back(best.nu);
  double previous = best.nu;

  for (int it = 1; it <= options.max_iters; ++it) {
    const VectorXd next = linearized_step(p, ub, problem, options);
    for (Eigen::Index k = 0; k < next.size(); ++k) {
      if (next(k) < problem.epsilon || next(k) > ub(k))
        throw std::logic_error("pilot iterate left its box");
    }
    const double objective = nmse_objective(next, problem);
    out.objective_trace.push_back(objective);
    if (objective > previous + 1e-12 * std::max(1.0, std::abs(previous))) {
      ++out.objective_increases;
      log_debug("pilot objective increased from " + std::to_string(previous) + " to " +
                std::to_string(objective) + " at iteration " + std::to_string(it));
    }
    previous = objective;
    if (objective < best.nu) {
      best.nu = objective;
      best.p_pilot = next;
    }
    const double step = (next - p).lpNorm<Eigen::Infinity>();
    p = next;
    out.iterations = it;
    if (step <= options.tol) {
      out.converged = true;
      break;
    }
  }

  out.p_pilot = best.p_pilot;
  out.nu = best.nu;
  return out;
}

namespace {

// Smallest own power x in [epsilon, ub] with sum_m I_m / (a_m x + I_m) <= nu,
// where a_m = tau_p beta_mk and I_m is the frozen co-pilot interference plus
// noise. Returns +inf when even ub misses nu. The left-hand side is convex and
// decreasing in x, so Newton steps from the left never overshoot the root.
double required_power(const PilotOptProblem& problem, Eigen::Index k, const VectorXd& interference,
                      double nu, double ub) {
  const ServingSet& aps = problem.serving_sets[k];
  auto value = [&](double x, double* slope) {
    double f = 0.0;
    double df = 0.0;
    for (std::size_t i = 0; i < aps.size(); ++i) {
      const double a = problem.tau_p * problem.beta(aps[i], k);
      const double d = a * x + interference(Eigen::Index(i));
      f += interference(Eigen::Index(i)) / d;
      df -= interference(Eigen::Index(i)) * a / (d * d);
    }
    if (slope) *slope = df;
    return f;
  };
  const double slack = 1e-12 * std::max(1.0, nu);
  double x = problem.epsilon;
  double slope = 0.0;
  double f = value(x, &slope);
  if (f <= nu + slack) return x;
  if (value(ub, nullptr) > nu + slack) return std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200 && f > nu + slack; ++it) {
    if (!(slope < 0.0)) break;
    const double next = std::min(ub, x - (f - nu) / slope);
    if (next <= x * (1.0 + 1e-15)) break;
    x = next;
    f = value(x, &slope);
  }
  return x;
}

// Minimal pilot vector meeting aggregate NMSE <= nu for everyone, by
// Gauss-Seidel iteration of the required-power map. `start` must lie below
// that minimal vector: epsilon, or the solution at any larger nu. Co-pilot
// groups do not interact, so each one is iterated to convergence on its own.
std::optional<VectorXd> pilot_feasible_at(double nu, const PilotOptProblem& problem,
                                          const VectorXd& ub, const VectorXd& start, double tol,
                                          int max_sweeps, int* sweeps_used) {
  VectorXd p = start;
  MatrixXd group = pilot_group_power(problem.beta, p, problem.assignment);
  VectorXd interference;
  for (int t = 0; t < problem.assignment.tau_p; ++t) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index k = 0; k < p.size(); ++k)
      if (problem.assignment.pilot_of[k] == t) members.push_back(k);
    if (members.empty()) continue;
    bool settled = false;
    for (int sweep = 0; sweep < max_sweeps && !settled; ++sweep) {
      double step = 0.0;
      for (Eigen::Index k : members) {
        const ServingSet& aps = problem.serving_sets[k];
        interference.resize(Eigen::Index(aps.size()));
        for (std::size_t i = 0; i < aps.size(); ++i) {
          const int m = aps[i];
          const double others = std::max(0.0, group(m, t) - p(k) * problem.beta(m, k));
          interference(Eigen::Index(i)) = problem.tau_p * others + problem.sigma2;
        }
        const double x = required_power(problem, k, interference, nu, ub(k));
        if (!std::isfinite(x)) return std::nullopt;
        // The map is monotone from below; guard against rounding pulling back.
        const double next = std::max(x, p(k));
        step = std::max(step, next - p(k));
        group.col(t) += (next - p(k)) * problem.beta.col(k);
        p(k) = next;
      }
      if (sweeps_used) ++*sweeps_used;
      settled = step <= tol;
    }
    if (!settled) return std::nullopt;
  }
  return p;
}

}  // namespace

PilotOptSolution solve_p3_exact(const PilotOptProblem& problem, const PilotSolverOptions& options) {
  const VectorXd ub = problem.upper_bounds();
  const auto K = ub.size();
  PilotOptSolution out;

  // Bracket: nobody can beat its own ub with the others at epsilon, and the
  // all-ub point is feasible for its own objective.
  const VectorXd floor_pilots = VectorXd::Constant(K, problem.epsilon);
  double lo = 0.0;
  for (Eigen::Index k = 0; k < K; ++k) {
    VectorXd probe = floor_pilots;
    probe(k) = ub(k);
    lo = std::max(lo, aggregate_nmse(probe, problem)(k));
  }
  double hi = nmse_objective(ub, problem);
  VectorXd best = ub;
  out.objective_trace.push_back(hi);

  // The minimal vector shrinks as nu grows, so the last feasible solution is
  // a valid start point for every smaller nu.
  VectorXd start = floor_pilots;
  if (auto p = pilot_feasible_at(lo, problem, ub, start, options.tol, options.max_sweeps,
                                 &out.sweeps)) {
    best = *p;
    hi = lo;
  }
  while (hi - lo > options.nu_tol) {
    const double mid = 0.5 * (lo + hi);
    ++out.iterations;
    if (auto p = pilot_feasible_at(mid, problem, ub, start, options.tol, options.max_sweeps,
                                   &out.sweeps)) {
      start = *p;
      hi = mid;
      best = std::move(*p);
      out.objective_trace.push_back(nmse_objective(best, problem));
    } else {
      lo = mid;
    }
  }
  for (Eigen::Index k = 0; k < K; ++k)
    if (best(k) < problem.epsilon || best(k) > ub(k))
      throw std::logic_error("pilot solution left its box");
  out.p_pilot = best;
  out.nu = nmse_objective(best, problem);
  out.converged = true;
  return out;
}

PilotOptSolution solve_p3(const PilotOptProblem& problem, const PilotSolverOptions& options) {
  return options.method == PilotMethod::kLinearized ? solve_p3_linearized(problem, options)
                                                    : solve_p3_exact(problem, options);
}

EnvelopeDiagnostic envelope_diagnostic(const VectorXd& p_pilot, const PilotOptProblem& problem) {
  const MatrixXd v =
      theta(problem.beta, p_pilot, problem.assignment, problem.sigma2, problem.tau_p);
  EnvelopeDiagnostic d;
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    for (int m : problem.serving_sets[k]) {
      const double z = problem.tau_p * p_pilot(k) * problem.beta(m, k);
      const double q = 1.0 - z / v(m, k);
      const double upper = 1.0 - z / v(m, k) + (1.0 - z);
      const double lower = 1.0 - z / v(m, k) + (1.0 - v(m, k));
      if (q > upper) {
        ++d.upper_violations;
        d.max_violation = std::max(d.max_violation, q - upper);
      }
      if (q < lower) {
        ++d.lower_violations;
        d.max_violation = std::max(d.max_violation, lower - q);
      }
    }
  }
  return d;
}

}  // namespace cfpc
