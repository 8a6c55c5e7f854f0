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

#ifndef CFPC_NETWORK_MODEL_HPP_
#define CFPC_NETWORK_MODEL_HPP_

#include <random>
#include <vector>

#include "cfpc/config.hpp"
#include "cfpc/types.hpp"

namespace cfpc {

using Rng = std::mt19937_64;

inline constexpr double kBoltzmann = 1.381e-23;

struct Topology {
  std::vector<Point> ap_positions;
  std::vector<Point> ue_positions;
  double area_side_km = 1.0;
};

/// Linear-scale large-scale fading, M x K.
struct LargeScaleFading {
  MatrixXd beta;
  MatrixXd distance_km;
};

/// `count` points i.i.d. uniform on [0, side)^2.
std::vector<Point> draw_uniform_points(int count, double side, Rng& rng);

/// APs first, then UEs, from the same stream.
Topology generate_topology(const SimulationConfig& config, Rng& rng);

/// Torus distance: per-axis minimum over the direct and the wrapped offset.
inline double wrap_distance(const Point& a, const Point& b, double side) {
  const Eigen::Array2d delta = (a - b).array().abs();
  return delta.min(side - delta).matrix().norm();
}

/// Hata-type constant L in dB.
double hata_constant_db(const SimulationConfig& config);

/// Three-slope path loss in dB (negative). Distances in kilometres; d0 and d1
/// are converted from the metre-valued configuration fields.
template <typename Scalar>
Scalar path_loss_db(Scalar d_km, double hata_db, double d0_km, double d1_km) {
  using std::log10;
  using std::max;
  const Scalar d = max(d_km, Scalar(1e-12));
  if (d > d1_km) return Scalar(-hata_db) - 35.0 * log10(d);
  if (d > d0_km) return Scalar(-hata_db - 15.0 * std::log10(d1_km)) - 20.0 * log10(d);
  return Scalar(-hata_db - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d0_km));
}

double path_loss_db(double d_km, const SimulationConfig& config);

/// Wrap-around AP-to-UE distances, M x K.
MatrixXd distance_matrix(const Topology& topology);

/// beta_mk = 10^((Gamma_mk + sigma_sh z_mk) / 10). One z_mk is drawn per link
/// in column-major order; it only takes effect when d_mk >= d1.
LargeScaleFading large_scale_fading(const Topology& topology, const SimulationConfig& config,
                                    Rng& rng);

/// k_B T0 B NF with NF converted from dB to a linear factor.
double noise_power_w(const SimulationConfig& config);

}  // namespace cfpc

#endif  // CFPC_NETWORK_MODEL_HPP_
