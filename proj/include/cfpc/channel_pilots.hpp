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

#ifndef CFPC_CHANNEL_PILOTS_HPP_
#define CFPC_CHANNEL_PILOTS_HPP_

#include <vector>

#include "cfpc/network_model.hpp"
#include "cfpc/types.hpp"

namespace cfpc {

/// Pilot index (0-based, in [0, tau_p)) of every user. Pilots are mutually
/// orthogonal, so |phi_k^H phi_j|^2 is 1 when two users share an index and 0
/// otherwise; the sequences themselves are never materialised.
struct PilotAssignment {
  std::vector<int> pilot_of;
  int tau_p = 1;

  int num_users() const { return static_cast<int>(pilot_of.size()); }
  bool shares_pilot(int k, int j) const { return pilot_of[k] == pilot_of[j]; }
  /// K x K co-pilot indicator c_kj.
  MatrixXd copilot_mask() const;
};

/// Small-scale realization: g_mk = sqrt(beta_mk) h_mk stacked AP-major, i.e.
/// rows [m*N, m*N + N) of column k hold the N antennas of AP m.
struct ChannelRealization {
  Eigen::MatrixXcd g;
  int num_aps = 0;
  int antennas = 0;

  auto link(int m, int k) const { return g.block(Eigen::Index(m) * antennas, k, antennas, 1); }
};

/// Each user draws its pilot i.i.d. uniformly; no orthogonality is enforced.
PilotAssignment assign_pilots_random(int num_users, int tau_p, Rng& rng);

/// Per-pilot received power sum_{j in S_t} p_j beta_mj, M x tau_p.
template <typename DerivedB, typename DerivedP>
Mat<typename DerivedB::Scalar> pilot_group_power(const Eigen::MatrixBase<DerivedB>& beta,
                                                 const Eigen::MatrixBase<DerivedP>& pilot_powers,
                                                 const PilotAssignment& assignment) {
  using Scalar = typename DerivedB::Scalar;
  Mat<Scalar> group = Mat<Scalar>::Zero(beta.rows(), assignment.tau_p);
  for (Eigen::Index j = 0; j < beta.cols(); ++j)
    group.col(assignment.pilot_of[j]) += pilot_powers(j) * beta.col(j);
  return group;
}

/// theta_mk = tau_p sum_j c_kj p_j beta_mj + sigma^2.
template <typename DerivedB, typename DerivedP>
Mat<typename DerivedB::Scalar> theta(const Eigen::MatrixBase<DerivedB>& beta,
                                     const Eigen::MatrixBase<DerivedP>& pilot_powers,
                                     const PilotAssignment& assignment,
                                     typename DerivedB::Scalar sigma2, int tau_p) {
  using Scalar = typename DerivedB::Scalar;
  const Mat<Scalar> group = pilot_group_power(beta, pilot_powers, assignment);
  Mat<Scalar> out(beta.rows(), beta.cols());
  for (Eigen::Index k = 0; k < beta.cols(); ++k)
    out.col(k) = (Scalar(tau_p) * group.col(assignment.pilot_of[k])).array() + sigma2;
  return out;
}

/// NMSE_mk = 1 - tau_p p_k beta_mk / theta_mk.
template <typename DerivedB, typename DerivedP>
Mat<typename DerivedB::Scalar> nmse(const Eigen::MatrixBase<DerivedB>& beta,
                                    const Eigen::MatrixBase<DerivedP>& pilot_powers,
                                    const PilotAssignment& assignment,
                                    typename DerivedB::Scalar sigma2, int tau_p) {
  using Scalar = typename DerivedB::Scalar;
  const Mat<Scalar> th = theta(beta, pilot_powers, assignment, sigma2, tau_p);
  const Mat<Scalar> own = Scalar(tau_p) * (beta * pilot_powers.asDiagonal());
  return (Scalar(1) - own.array() / th.array()).matrix();
}

/// Per-antenna estimation-error variance gamma_mk = beta_mk - tau_p p_k beta_mk^2 / theta_mk.
template <typename DerivedB, typename DerivedP>
Mat<typename DerivedB::Scalar> gamma(const Eigen::MatrixBase<DerivedB>& beta,
                                     const Eigen::MatrixBase<DerivedP>& pilot_powers,
                                     const PilotAssignment& assignment,
                                     typename DerivedB::Scalar sigma2, int tau_p) {
  return (nmse(beta, pilot_powers, assignment, sigma2, tau_p).array() * beta.array()).matrix();
}

/// Draws g_mk = sqrt(beta_mk) h_mk with h_mk ~ CN(0, I_N).
ChannelRealization draw_channel(const MatrixXd& beta, int antennas, Rng& rng);

/// Synthesises the projected pilot observations of every AP (one noise draw
/// per AP and pilot) and returns the MMSE estimates, same layout as the
/// realization. Only used for Monte-Carlo validation.
Eigen::MatrixXcd mmse_estimate(const ChannelRealization& realization, const MatrixXd& beta,
                               const VectorXd& pilot_powers, const PilotAssignment& assignment,
                               double sigma2, int tau_p, Rng& rng);

}  // namespace cfpc

#endif  // CFPC_CHANNEL_PILOTS_HPP_
