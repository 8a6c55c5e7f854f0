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

// Independent brute-force and Monte-Carlo reference computations shared by
// the unit and acceptance tests. Nothing here calls the solvers under test.

#ifndef CFPC_TESTS_ORACLES_HPP_
#define CFPC_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "cfpc/channel_pilots.hpp"
#include "cfpc/data_power_opt.hpp"
#include "cfpc/network_model.hpp"
#include "cfpc/pilot_power_opt.hpp"
#include "cfpc/se_statistics.hpp"

namespace cfpc::oracle {

inline double linspace_at(double lo, double hi, int points, int i) {
  return points == 1 ? lo : lo + (hi - lo) * double(i) / double(points - 1);
}

/// Best value of `f` over the tensor grid with `points` per axis on
/// [lo_k, hi_k]; `arg` receives the maximiser.
inline double grid_maximize(const std::function<double(const VectorXd&)>& f, const VectorXd& lo,
                            const VectorXd& hi, int points, VectorXd* arg = nullptr) {
  const auto K = lo.size();
  std::vector<int> idx(static_cast<std::size_t>(K), 0);
  VectorXd x(K);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    for (Eigen::Index k = 0; k < K; ++k) x(k) = linspace_at(lo(k), hi(k), points, idx[k]);
    const double v = f(x);
    if (v > best) {
      best = v;
      if (arg) *arg = x;
    }
    Eigen::Index k = 0;
    while (k < K && ++idx[k] == points) idx[k++] = 0;
    if (k == K) break;
  }
  return best;
}

/// min_k SINR_k on the data-power grid over [0, ub].
inline double grid_max_min_sinr(const SinrCoefficients& c, const VectorXd& ub, int points,
                                VectorXd* arg = nullptr) {
  return grid_maximize([&](const VectorXd& p) { return c.sinr(p).minCoeff(); },
                       VectorXd::Zero(ub.size()), ub, points, arg);
}

/// Max-min SINR by direct linear algebra: for a target t the minimal power
/// vector solves (diag(gain) - t cross) p = t noise, which has a non-negative
/// solution iff the spectral radius of t diag(gain)^-1 cross is below one.
/// Bisection on t, feasible when that solution lies inside [0, ub].
inline double linear_max_min_sinr(const SinrCoefficients& c, const VectorXd& ub,
                                  VectorXd* arg = nullptr) {
  const auto K = ub.size();
  const MatrixXd normalized = c.gain.cwiseInverse().asDiagonal() * c.cross;
  const double radius = normalized.eigenvalues().cwiseAbs().maxCoeff();
  auto solve = [&](double t, VectorXd* p) {
    if (t * radius >= 1.0) return false;
    const MatrixXd A = MatrixXd(c.gain.asDiagonal()) - t * c.cross;
    *p = A.partialPivLu().solve(VectorXd::Constant(K, t * c.noise));
    return (p->array() >= 0.0).all() && (p->array() <= ub.array()).all();
  };
  double lo = 0.0;
  double hi = radius > 0.0 ? 1.0 / radius : 1.0;
  VectorXd p;
  while (solve(hi, &p)) hi *= 2.0;
  VectorXd best = VectorXd::Zero(K);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (solve(mid, &p)) {
      lo = mid;
      best = p;
    } else {
      hi = mid;
    }
  }
  if (arg) *arg = best;
  return lo;
}

/// min over the pilot grid on [epsilon, ub] of the max aggregate NMSE,
/// evaluated from the defining formula.
inline double grid_min_max_nmse(const PilotOptProblem& problem, const VectorXd& ub, int points,
                                VectorXd* arg = nullptr) {
  const auto K = ub.size();
  auto objective = [&](const VectorXd& p) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) {
      double total = 0.0;
      for (int m : problem.serving_sets[k]) {
        double th = problem.sigma2;
        for (Eigen::Index j = 0; j < K; ++j)
          if (problem.assignment.pilot_of[j] == problem.assignment.pilot_of[k])
            th += problem.tau_p * p(j) * problem.beta(m, j);
        total += 1.0 - problem.tau_p * p(k) * problem.beta(m, k) / th;
      }
      worst = std::max(worst, total);
    }
    return -worst;
  };
  return -grid_maximize(objective, VectorXd::Constant(K, problem.epsilon), ub, points, arg);
}

/// Large-scale gains 10^U(lo_exp, hi_exp).
inline MatrixXd random_beta(int M, int K, double lo_exp, double hi_exp, Rng& rng) {
  std::uniform_real_distribution<double> u(lo_exp, hi_exp);
  MatrixXd beta(M, K);
  for (Eigen::Index k = 0; k < K; ++k)
    for (Eigen::Index m = 0; m < M; ++m) beta(m, k) = std::pow(10.0, u(rng));
  return beta;
}

}  // namespace cfpc::oracle

#endif  // CFPC_TESTS_ORACLES_HPP_
