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

#include "cfpc/channel_pilots.hpp"

#include <cmath>

namespace cfpc {

namespace {

// CN(0, variance) sample.
std::complex<double> complex_normal(double variance, std::normal_distribution<double>& n, Rng& rng) {
  const double s = std::sqrt(variance / 2.0);
  const double re = n(rng);
  const double im = n(rng);
  return {s * re, s * im};
}

}  // namespace

MatrixXd PilotAssignment::copilot_mask() const {
  const int K = num_users();
  MatrixXd c(K, K);
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < K; ++j) c(k, j) = shares_pilot(k, j) ? 1.0 : 0.0;
  return c;
}

PilotAssignment assign_pilots_random(int num_users, int tau_p, Rng& rng) {
  if (tau_p < 1) throw std::invalid_argument("tau_p must be at least 1");
  std::uniform_int_distribution<int> pick(0, tau_p - 1);
  PilotAssignment a;
  a.tau_p = tau_p;
  a.pilot_of.resize(static_cast<std::size_t>(num_users));
  for (auto& p : a.pilot_of) p = pick(rng);
  return a;
}

ChannelRealization draw_channel(const MatrixXd& beta, int antennas, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ChannelRealization r;
  r.num_aps = static_cast<int>(beta.rows());
  r.antennas = antennas;
  r.g.resize(beta.rows() * antennas, beta.cols());
  for (Eigen::Index k = 0; k < beta.cols(); ++k)
    for (Eigen::Index m = 0; m < beta.rows(); ++m)
      for (int a = 0; a < antennas; ++a) r.g(m * antennas + a, k) = complex_normal(beta(m, k), n, rng);
  return r;
}

Eigen::MatrixXcd mmse_estimate(const ChannelRealization& realization, const MatrixXd& beta,
                               const VectorXd& pilot_powers, const PilotAssignment& assignment,
                               double sigma2, int tau_p, Rng& rng) {
  const int M = realization.num_aps;
  const int N = realization.antennas;
  const auto K = beta.cols();
  std::normal_distribution<double> n(0.0, 1.0);

  // y_mt = sum_{j in S_t} sqrt(tau_p p_j) g_mj + w_mt, stacked like g.
  Eigen::MatrixXcd y(Eigen::Index(M) * N, assignment.tau_p);
  for (int t = 0; t < assignment.tau_p; ++t)
    for (Eigen::Index r = 0; r < y.rows(); ++r) y(r, t) = complex_normal(sigma2, n, rng);
  for (Eigen::Index j = 0; j < K; ++j)
    y.col(assignment.pilot_of[j]) += std::sqrt(tau_p * pilot_powers(j)) * realization.g.col(j);

  const MatrixXd th = theta(beta, pilot_powers, assignment, sigma2, tau_p);
  Eigen::MatrixXcd g_hat(y.rows(), K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double root = std::sqrt(tau_p * pilot_powers(k));
    for (int m = 0; m < M; ++m) {
      const double scale = root * beta(m, k) / th(m, k);
      g_hat.block(Eigen::Index(m) * N, k, N, 1) =
          scale * y.block(Eigen::Index(m) * N, assignment.pilot_of[k], N, 1);
    }
  }
  return g_hat;
}

}  // namespace cfpc
