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
#include "doctest.h"
#include "oracles.hpp"

using namespace cfpc;

namespace {

DataOptProblem make_problem(const MatrixXd& beta, std::vector<int> pilots, int tau_p,
                            const VectorXd& p_pilot, double sigma2) {
  DataOptProblem d;
  d.beta = beta;
  d.assignment.pilot_of = std::move(pilots);
  d.assignment.tau_p = tau_p;
  d.p_pilot_hat = p_pilot;
  d.sigma2 = sigma2;
  d.tau_p = tau_p;
  d.tau_c = 20;
  d.p_max = 1.0;
  d.antennas = 1;
  return d;
}

}  // namespace

TEST_CASE("data upper bound") {
  const DataOptProblem d =
      make_problem(MatrixXd::Ones(1, 2), {0, 1}, 2, (VectorXd(2) << 1.0, 20.0).finished(), 1.0);
  const VectorXd ub = d.upper_bounds();
  CHECK(ub(0) == doctest::Approx(1.0));
  CHECK(ub(1) == 0.0);
}

TEST_CASE("constraint residual sign matches the SINR target") {
  Rng rng(1);
  const DataOptProblem d = make_problem(oracle::random_beta(3, 3, -1, 0, rng), {0, 1, 0}, 2,
                                        VectorXd::Constant(3, 0.5), 0.1);
  const VectorXd p = (VectorXd(3) << 0.2, 0.6, 0.9).finished();
  const VectorXd sinr = d.coefficients().sinr(p);
  for (double t : {0.5 * sinr.minCoeff(), sinr.maxCoeff() * 1.5}) {
    const VectorXd r = sinr_constraint_residual(t, p, d);
    for (int k = 0; k < 3; ++k) CHECK((r(k) >= 0) == (sinr(k) >= t));
  }
}

TEST_CASE("feasibility map returns the minimal power vector") {
  Rng rng(2);
  const DataOptProblem d = make_problem(oracle::random_beta(4, 3, -1, 0, rng), {0, 0, 1}, 2,
                                        VectorXd::Constant(3, 0.5), 0.05);
  const SinrCoefficients c = d.coefficients();
  const VectorXd ub = d.upper_bounds();
  CHECK(feasible_at(0.0, d)->isZero());
  const double t = 0.5 * oracle::grid_max_min_sinr(c, ub, 30);
  const auto p = feasible_at(t, d);
  REQUIRE(p.has_value());
  CHECK((c.sinr(*p).array() >= t * (1 - 1e-6)).all());
  CHECK((p->array() <= ub.array()).all());
  // Every feasible grid point dominates the minimal vector.
  const int n = 25;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int e = 0; e < n; ++e) {
        const VectorXd q = (VectorXd(3) << oracle::linspace_at(0, ub(0), n, a),
                            oracle::linspace_at(0, ub(1), n, b), oracle::linspace_at(0, ub(2), n, e))
                               .finished();
        if ((c.sinr(q).array() >= t).all()) CHECK((q.array() >= p->array() - 1e-9).all());
      }
  CHECK_FALSE(feasible_at(10.0 * oracle::grid_max_min_sinr(c, ub, 30), d).has_value());
}

TEST_CASE("single user takes its whole budget") {
  MatrixXd beta(3, 1);
  beta << 0.5, 1.0, 0.2;
  const DataOptProblem d = make_problem(beta, {0}, 1, VectorXd::Constant(1, 2.0), 0.3);
  const DataOptSolution s = solve_p5(d);
  const SinrCoefficients c = d.coefficients();
  const double ub = d.upper_bounds()(0);
  CHECK(s.t_star == doctest::Approx(c.gain(0) * ub / (c.cross(0, 0) * ub + c.noise)));
  CHECK(s.p_data(0) == doctest::Approx(ub).epsilon(1e-6));
}

TEST_CASE("max-min data solver matches grid search") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Rng pick(trial);
    const PilotAssignment a = assign_pilots_random(3, 2, pick);
    const DataOptProblem d = make_problem(oracle::random_beta(4, 3, -1.5, 0.5, rng), a.pilot_of, 2,
                                          VectorXd::Constant(3, 0.7), 0.05);
    const SinrCoefficients c = d.coefficients();
    const VectorXd ub = d.upper_bounds();
    const DataOptSolution s = solve_p5(d);
    CHECK(s.t_star >= oracle::grid_max_min_sinr(c, ub, 30) * (1 - 1e-4));
    CHECK(s.t_star == doctest::Approx(oracle::linear_max_min_sinr(c, ub)).epsilon(1e-4));
    CHECK((c.sinr(s.p_data).array() >= s.t_star * (1 - 1e-6)).all());
    CHECK((s.p_data.array() <= ub.array() + 1e-12).all());
    CHECK((s.p_data.array() >= 0).all());
  }
}

TEST_CASE("single user is feasible exactly up to its full-power SINR") {
  MatrixXd beta(2, 1);
  beta << 0.4, 0.9;
  const DataOptProblem d = make_problem(beta, {0}, 1, VectorXd::Constant(1, 1.0), 0.2);
  const double top = d.coefficients().sinr(d.upper_bounds())(0);
  CHECK(feasible_at(top * (1 - 1e-6), d).has_value());
  CHECK_FALSE(feasible_at(top * (1 + 1e-6), d).has_value());
}

TEST_CASE("symmetric instance gets equal powers and equal SINRs") {
  MatrixXd beta(3, 3);
  beta.col(0) << 0.3, 1.0, 0.1;
  beta.col(1) = beta.col(0);
  beta.col(2) = beta.col(0);
  const DataOptProblem d = make_problem(beta, {0, 0, 0}, 1, VectorXd::Constant(3, 0.8), 0.1);
  const DataOptSolution s = solve_p5(d);
  CHECK(s.p_data.maxCoeff() - s.p_data.minCoeff() <= 1e-9 * s.p_data.maxCoeff());
  const VectorXd sinr = d.coefficients().sinr(s.p_data);
  CHECK(sinr.maxCoeff() == doctest::Approx(sinr.minCoeff()));
}

TEST_CASE("at the max-min solution some user is tight") {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const DataOptProblem d = make_problem(oracle::random_beta(5, 4, -2, 0, rng), {0, 1, 0, 1}, 2,
                                          VectorXd::Constant(4, 0.5), 0.05);
    const DataOptSolution s = solve_p5(d);
    const VectorXd sinr = d.coefficients().sinr(s.p_data);
    CHECK(sinr.minCoeff() == doctest::Approx(s.t_star).epsilon(1e-4));
  }
}
