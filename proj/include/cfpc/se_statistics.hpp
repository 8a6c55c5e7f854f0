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

#ifndef CFPC_SE_STATISTICS_HPP_
#define CFPC_SE_STATISTICS_HPP_

#include <vector>

#include "cfpc/channel_pilots.hpp"
#include "cfpc/config.hpp"
#include "cfpc/types.hpp"

namespace cfpc {

/// Per-user pilot and data transmit powers in watts.
struct PowerState {
  VectorXd p_pilot;
  VectorXd p_data;
};

/// Use-and-then-forget statistics of the MRC-combined effective channels
/// u_jk = [g_hat_1k^H g_1j, ..., g_hat_Mk^H g_Mj]^T.
struct UatfStatistics {
  MatrixXd u_mean;              ///< M x K, E{[u_kk]_m}
  MatrixXd f_diag;              ///< M x K, [F_k]_mm
  std::vector<MatrixXd> u2;     ///< u2[m](j, k) = E{|[u_jk]_m|^2}
  std::vector<MatrixXd> u_cross;  ///< u_cross[m](j, k) = E{[u_jk]_m}; zero unless j shares k's pilot
  NoiseStat noise_stat = NoiseStat::kEstimateBased;
};

struct SEReport {
  VectorXd sinr;
  VectorXd se;
  double prelog = 0.0;
};

/// Closed-form moments of the combined channels. Only `power_state.p_pilot`
/// is used.
UatfStatistics uatf_statistics(const MatrixXd& beta, const PilotAssignment& assignment,
                               const PowerState& power_state, double sigma2, int tau_p,
                               int antennas, NoiseStat noise_stat = NoiseStat::kEstimateBased);

/// UatF SINR with real combining weights, row k of `a_weights` (K x M) being
/// a_k. Inter-AP covariance terms are products of means. Throws
/// std::domain_error when a denominator is not positive.
VectorXd sinr_general(const UatfStatistics& stats, const VectorXd& p_data,
                      const MatrixXd& a_weights);
/// Same with a_k = [1, ..., 1].
VectorXd sinr_general(const UatfStatistics& stats, const VectorXd& p_data);

/// Closed-form SINR used as the optimisation objective:
///
///   SINR_k = N tau_p p_k^d p_k^p sum_m beta_mk^2 / theta_mk
///            / sum_m (N tau_p sum_{j != k} p_j^d p_j^p beta_mj^2 / theta_mk
///                     + sum_j p_j^d beta_mj + sigma^2)
template <typename Scalar>
Vec<Scalar> sinr_closed_form(const Mat<Scalar>& beta, const PilotAssignment& assignment,
                             const Vec<Scalar>& p_pilot, const Vec<Scalar>& p_data, Scalar sigma2,
                             int tau_p, int antennas) {
  const Eigen::Index M = beta.rows();
  const Eigen::Index K = beta.cols();
  const Mat<Scalar> th = theta(beta, p_pilot, assignment, sigma2, tau_p);
  const Mat<Scalar> inv_th = th.array().max(Scalar(kDenominatorFloor)).inverse().matrix();
  const Mat<Scalar> beta_sq = beta.array().square().matrix();

  // w_mj = p_j^d p_j^p beta_mj^2
  const Mat<Scalar> w = beta_sq * (p_data.array() * p_pilot.array()).matrix().asDiagonal();
  const Vec<Scalar> w_total = w.rowwise().sum();
  const Scalar coherent = Scalar(antennas * tau_p);
  const Scalar incoherent = (beta * p_data).sum();

  Vec<Scalar> sinr(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const Scalar desired =
        coherent * p_data(k) * p_pilot(k) * (beta_sq.col(k).array() * inv_th.col(k).array()).sum();
    const Scalar leakage =
        coherent * ((w_total - w.col(k)).array() * inv_th.col(k).array()).sum();
    const Scalar denominator = leakage + incoherent + Scalar(M) * sigma2;
    sinr(k) = desired / std::max(denominator, Scalar(kDenominatorFloor));
  }
  return sinr;
}

VectorXd sinr_closed_form(const MatrixXd& beta, const PilotAssignment& assignment,
                          const PowerState& power_state, double sigma2, int tau_p, int antennas);

/// The closed-form SINR written as No_k / De_k with No_k = gain_k p_k^d and
/// De_k = (cross * p^d)_k + noise, both affine in the data powers for fixed
/// pilot powers.
struct SinrCoefficients {
  VectorXd gain;   ///< K
  MatrixXd cross;  ///< K x K, non-negative
  double noise = 0.0;

  VectorXd numerator(const VectorXd& p_data) const { return gain.cwiseProduct(p_data); }
  VectorXd denominator(const VectorXd& p_data) const {
    return (cross * p_data).array() + noise;
  }
  VectorXd sinr(const VectorXd& p_data) const {
    return numerator(p_data).cwiseQuotient(denominator(p_data));
  }
};

SinrCoefficients closed_form_coefficients(const MatrixXd& beta, const PilotAssignment& assignment,
                                          const VectorXd& p_pilot, double sigma2, int tau_p,
                                          int antennas);

/// se_k = (1 - tau_p / tau_c) log2(1 + sinr_k).
SEReport spectral_efficiency(const VectorXd& sinr, int tau_p, int tau_c);

/// Estimates every expectation of the UatF SINR (a_k = 1) from simulated
/// channels, MMSE estimates and receiver noise, then forms the same ratio.
VectorXd monte_carlo_sinr_oracle(const MatrixXd& beta, const PilotAssignment& assignment,
                                 const PowerState& power_state, double sigma2, int tau_p,
                                 int antennas, int num_draws, Rng& rng);

}  // namespace cfpc

#endif  // CFPC_SE_STATISTICS_HPP_
