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

#ifndef CFPC_EXPERIMENT_HPP_
#define CFPC_EXPERIMENT_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cfpc/config.hpp"
#include "cfpc/network_model.hpp"
#include "cfpc/power_control.hpp"

namespace cfpc {

/// How the "50% likely" SE is read: median of all per-user samples pooled
/// over realizations, or median of the per-realization minimum.
enum class SummaryMetric { kPooled, kMinRate };

SummaryMetric parse_metric(const std::string& name);
std::string to_string(SummaryMetric metric);

inline constexpr const char* kRawCsvHeader =
    "realization,scheme,user,se_bps_hz,pilot_power_w,data_power_w,sinr_linear";

struct ExperimentSpec {
  SimulationConfig config;
  std::vector<Scheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
  int realizations = 100;
  /// (M, N) pairs; empty runs `config` as is.
  std::vector<std::pair<int, int>> sweep;
  bool enforce_constant_antennas = true;
  std::string output_dir;  ///< empty: nothing is written
  SummaryMetric metric = SummaryMetric::kPooled;
  int threads = 1;

  void validate() const;
};

/// One user of one scheme in one realization; a raw CSV row.
struct Sample {
  int realization = 0;
  Scheme scheme = Scheme::kIppa;
  int user = 0;
  double se = 0.0;
  double pilot_power = 0.0;
  double data_power = 0.0;
  double sinr = 0.0;
};

/// Per realization and scheme bookkeeping that does not go into the CSV.
struct RunRecord {
  int realization = 0;
  Scheme scheme = Scheme::kIppa;
  int outer_iterations = 0;
  bool converged = false;
  double final_delta = 0.0;
  double budget_slack = 0.0;
  double min_se = 0.0;
};

struct SchemeSummary {
  double median_se = 0.0;  ///< per `metric`
  double p5_se = 0.0;
  double p95_se = 0.0;
  double mean_se = 0.0;
  double pooled_median_se = 0.0;
  double median_min_se = 0.0;
  std::size_t n_samples = 0;
  int skipped = 0;
};

struct StatsSummary {
  std::map<Scheme, SchemeSummary> schemes;
  int realizations = 0;
  int skipped = 0;
  SummaryMetric metric = SummaryMetric::kPooled;
};

struct ExperimentResult {
  StatsSummary summary;
  std::vector<Sample> samples;  ///< realization-major, then scheme order, then user
  std::vector<RunRecord> runs;
  std::vector<std::string> skip_reasons;
};

struct SweepPointResult {
  int num_aps = 0;
  int antennas = 0;
  ExperimentResult result;
};

struct CdfPoint {
  double value = 0.0;
  double fraction = 0.0;
};

/// Empirical CDF, ascending, fractions i/n. Throws std::invalid_argument on
/// empty input.
std::vector<CdfPoint> cdf(std::vector<double> samples);

/// Nearest-rank percentile, q in [0, 1]: the ceil(q n)-th smallest sample.
double percentile(std::vector<double> samples, double q);

/// Network draw of one realization; identical for every scheme.
struct Scenario {
  Topology topology;
  LargeScaleFading fading;
  PilotAssignment assignment;
  double sigma2 = 0.0;
};

/// Draws the scenario of realization `index` from a stream seeded by
/// (config.rng_seed, index). With fixed_topology the APs come from a stream
/// that only depends on the seed.
Scenario draw_scenario(const SimulationConfig& config, int index);

/// Runs `spec.config` (no sweep) and, with an output directory, writes
/// raw.csv and summary.json into it.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// One run_experiment per (M, N) into <output_dir>/M<M>_N<N>/.
std::vector<SweepPointResult> run_sweep(const ExperimentSpec& spec);

StatsSummary summarize(const std::vector<Sample>& samples, const std::vector<Scheme>& schemes,
                       int realizations, int skipped, SummaryMetric metric);

std::string raw_csv(const std::vector<Sample>& samples);
/// Parses raw CSV text; throws std::runtime_error on a header mismatch.
std::vector<Sample> parse_raw_csv(const std::string& text);
/// Scheme statistics plus a `meta` block with the configuration, the seed and
/// per-scheme convergence and budget figures taken from `runs`.
nlohmann::json summary_json(const StatsSummary& summary, const ExperimentSpec& spec,
                            const std::vector<RunRecord>& runs = {});

}  // namespace cfpc

#endif  // CFPC_EXPERIMENT_HPP_
