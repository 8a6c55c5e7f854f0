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

#ifndef CFPC_TYPES_HPP_
#define CFPC_TYPES_HPP_

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfpc {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Mat<double>;
using VectorXd = Vec<double>;
using VectorXcd = Vec<std::complex<double>>;

/// Planar position in kilometres.
using Point = Eigen::Vector2d;

/// Indices of the APs serving one user.
using ServingSet = std::vector<int>;

/// Raised when a power budget leaves no feasible point (e.g. a pilot upper
/// bound below the floor epsilon).
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised for malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Smallest denominator used in ratio evaluations.
inline constexpr double kDenominatorFloor = 1e-300;

}  // namespace cfpc

#endif  // CFPC_TYPES_HPP_
