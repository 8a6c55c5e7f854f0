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

#include "cfpc/se_statistics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cfpc {

UatfStatistics uatf_statistics(const MatrixXd& beta, const PilotAssignment& assignment,
                               const PowerState& power_state, double sigma2, int tau_p,
                               int antennas, NoiseStat noise_stat) {
  const Eigen::Index M = beta.rows();
  const Eigen::Index K = beta.cols();
  const double N = antennas;
  const VectorXd& p = power_state.p_pilot;
  const MatrixXd th = theta(beta, p, assignment, sigma2, tau_p);

  UatfStatistics s;
  s.noise_stat = noise_stat;
  s.u_mean.resize(M, K);
  s.f_diag.resize(M, K);
  s.u2.assign(static_cast<std::size_t>(M), MatrixXd::Zero(K, K));
  s.u_cross.assign(static_cast<std::size_t>(M), MatrixXd::Zero(K, K));

  for (Eigen::Index m = 0; m < M; ++m) {
    MatrixXd& u2 = s.u2[m];
    MatrixXd& mean = s.u_cross[m];
    for (Eigen::Index k = 0; k < K; ++k) {
      const double inv_th = 1.0 / std::max(th(m, k), kDenominatorFloor);
      // per-antenna variance of the estimate
      const double est_var = tau_p * p(k) * beta(m, k) * beta(m, k) * inv_th;
      for (Eigen::Index j = 0; j < K; ++j) {
        u2(j, k) = N * est_var * beta(m, j);
        if (assignment.shares_pilot(static_cast<int>(k), static_cast<int>(j))) {
          const double coh = tau_p * beta(m, j) * beta(m, k) * inv_th;
          u2(j, k) += N * N * p(k) * p(j) * coh * coh;
          mean(j, k) = N * std::sqrt(p(k) * p(j)) * coh;
        }
      }
      s.u_mean(m, k) = mean(k, k);
      s.f_diag(m, k) = noise_stat == NoiseStat::kEstimateBased ? sigma2 * N * est_var
                                                               : sigma2 * N * beta(m, k);
    }
  }
  return s;
}

VectorXd sinr_general(const UatfStatistics& stats, const VectorXd& p_data,
                      const MatrixXd& a_weights) {
  const auto M = static_cast<Eigen::Index>(stats.u2.size());
  const Eigen::Index K = stats.u_mean.cols();
  VectorXd sinr(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto a = a_weights.row(k);
    double signal_amp = 0.0;
    double noise = 0.0;
    for (Eigen::Index m = 0; m < M; ++m) {
      signal_amp += a(m) * stats.u_mean(m, k);
      noise += a(m) * a(m) * stats.f_diag(m, k);
    }
    double received = 0.0;
    for (Eigen::Index j = 0; j < K; ++j) {
      double diag = 0.0;
      double coherent = 0.0;
      for (Eigen::Index m = 0; m < M; ++m) {
        const double mu = stats.u_cross[m](j, k);
        diag += a(m) * a(m) * (stats.u2[m](j, k) - mu * mu);
        coherent += a(m) * mu;
      }
      received += p_data(j) * (diag + coherent * coherent);
    }
    const double desired = p_data(k) * signal_amp * signal_amp;
    const double denominator = received - desired + noise;
    if (!(denominator > 0.0))
      throw std::domain_error("non-positive UatF denominator for user " + std::to_string(k));
    sinr(k) = desired / denominator;
  }
  return sinr;
}

VectorXd sinr_general(const UatfStatistics& stats, const VectorXd& p_data) {
  return sinr_general(stats, p_data,
                      MatrixXd::Ones(stats.u_mean.cols(), static_cast<Eigen::Index>(stats.u2.size())));
}

VectorXd sinr_closed_form(const MatrixXd& beta, const PilotAssignment& assignment,
                          const PowerState& power_state, double sigma2, int tau_p, int antennas) {
  return sinr_closed_form<double>(beta, assignment, power_state.p_pilot, power_state.p_data, sigma2,
                                  tau_p, antennas);
}

SinrCoefficients closed_form_coefficients(const MatrixXd& beta, const PilotAssignment& assignment,
                                          const VectorXd& p_pilot, double sigma2, int tau_p,
                                          int antennas) {
  const MatrixXd inv_th =
      theta(beta, p_pilot, assignment, sigma2, tau_p).array().max(kDenominatorFloor).inverse().matrix();
  const MatrixXd beta_sq = beta.array().square().matrix();
  const double coherent = double(antennas) * tau_p;

  // (inv_th^T beta_sq)(k, j) = sum_m beta_mj^2 / theta_mk
  const MatrixXd ratio = inv_th.transpose() * beta_sq;

  SinrCoefficients c;
  c.gain = coherent * p_pilot.cwiseProduct(ratio.diagonal());
  c.cross = coherent * ratio * p_pilot.asDiagonal();
  c.cross.diagonal().setZero();
  c.cross.rowwise() += beta.colwise().sum();
  c.noise = double(beta.rows()) * sigma2;
  return c;
}

SEReport spectral_efficiency(const VectorXd& sinr, int tau_p, int tau_c) {
  SEReport r;
  r.prelog = 1.0 - static_cast<double>(tau_p) / tau_c;
  r.sinr = sinr;
  r.se = r.prelog * sinr.array().log1p() / std::log(2.0);
  return r;
}

VectorXd monte_carlo_sinr_oracle(const MatrixXd& beta, const PilotAssignment& assignment,
                                 const PowerState& power_state, double sigma2, int tau_p,
                                 int antennas, int num_draws, Rng& rng) {
  const Eigen::Index K = beta.cols();
  const int M = static_cast<int>(beta.rows());
  std::normal_distribution<double> n(0.0, 1.0);
  const double noise_scale = std::sqrt(sigma2 / 2.0);

  Eigen::VectorXcd mean_own = Eigen::VectorXcd::Zero(K);
  MatrixXd second = MatrixXd::Zero(K, K);  // (j, k): E|a_k^T u_jk|^2
  VectorXd noise_power = VectorXd::Zero(K);
  Eigen::VectorXcd w(Eigen::Index(M) * antennas);

  for (int draw = 0; draw < num_draws; ++draw) {
    const ChannelRealization g = draw_channel(beta, antennas, rng);
    const Eigen::MatrixXcd g_hat =
        mmse_estimate(g, beta, power_state.p_pilot, assignment, sigma2, tau_p, rng);
    for (Eigen::Index r = 0; r < w.size(); ++r) {
      const double re = n(rng);
      const double im = n(rng);
      w(r) = {noise_scale * re, noise_scale * im};
    }
    // x(k, j) = sum_m g_hat_mk^H g_mj
    const Eigen::MatrixXcd x = g_hat.adjoint() * g.g;
    const Eigen::VectorXcd noise = g_hat.adjoint() * w;
    mean_own += x.diagonal();
    second += x.cwiseAbs2().transpose();
    noise_power += noise.cwiseAbs2();
  }
  mean_own /= double(num_draws);
  second /= double(num_draws);
  noise_power /= double(num_draws);

  const VectorXd& p = power_state.p_data;
  VectorXd sinr(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double desired = p(k) * std::norm(mean_own(k));
    const double received = second.col(k).dot(p);
    const double denominator = received - desired + noise_power(k);
    sinr(k) = desired / std::max(denominator, kDenominatorFloor);
  }
  return sinr;
}

}  // namespace cfpc
