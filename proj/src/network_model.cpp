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

#include "cfpc/network_model.hpp"

#include <cmath>

namespace cfpc {

std::vector<Point> draw_uniform_points(int count, double side, Rng& rng) {
  std::uniform_real_distribution<double> coord(0.0, side);
  std::vector<Point> points(static_cast<std::size_t>(count));
  for (auto& p : points) {
    const double x = coord(rng);
    const double y = coord(rng);
    p = Point(x, y);
  }
  return points;
}

Topology generate_topology(const SimulationConfig& config, Rng& rng) {
  Topology topology;
  topology.area_side_km = config.area_side_km;
  topology.ap_positions = draw_uniform_points(config.num_aps, config.area_side_km, rng);
  topology.ue_positions = draw_uniform_points(config.num_users, config.area_side_km, rng);
  return topology;
}

double hata_constant_db(const SimulationConfig& config) {
  const double lf = std::log10(config.carrier_freq_mhz);
  return 46.3 + 33.9 * lf - 13.82 * std::log10(config.ap_height_m) -
         (1.1 * lf - 0.7) * config.ue_height_m + (1.56 * lf - 0.8);
}

double path_loss_db(double d_km, const SimulationConfig& config) {
  return path_loss_db(d_km, hata_constant_db(config), config.d0_m / 1000.0,
                      config.d1_m / 1000.0);
}

MatrixXd distance_matrix(const Topology& topology) {
  const auto M = static_cast<Eigen::Index>(topology.ap_positions.size());
  const auto K = static_cast<Eigen::Index>(topology.ue_positions.size());
  MatrixXd d(M, K);
  for (Eigen::Index k = 0; k < K; ++k)
    for (Eigen::Index m = 0; m < M; ++m)
      d(m, k) = wrap_distance(topology.ap_positions[m], topology.ue_positions[k],
                              topology.area_side_km);
  return d;
}

LargeScaleFading large_scale_fading(const Topology& topology, const SimulationConfig& config,
                                    Rng& rng) {
  const double hata = hata_constant_db(config);
  const double d0 = config.d0_m / 1000.0;
  const double d1 = config.d1_m / 1000.0;
  std::normal_distribution<double> z(0.0, 1.0);

  LargeScaleFading lsf;
  lsf.distance_km = distance_matrix(topology);
  lsf.beta.resize(lsf.distance_km.rows(), lsf.distance_km.cols());
  for (Eigen::Index k = 0; k < lsf.beta.cols(); ++k) {
    for (Eigen::Index m = 0; m < lsf.beta.rows(); ++m) {
      const double d = lsf.distance_km(m, k);
      const double shadow = config.shadow_std_db * z(rng);
      double gain_db = path_loss_db(d, hata, d0, d1);
      if (d >= d1) gain_db += shadow;
      lsf.beta(m, k) = std::pow(10.0, gain_db / 10.0);
    }
  }
  return lsf;
}

double noise_power_w(const SimulationConfig& config) {
  return kBoltzmann * config.noise_temp_k * config.bandwidth_hz *
         std::pow(10.0, config.noise_figure_db / 10.0);
}

}  // namespace cfpc
