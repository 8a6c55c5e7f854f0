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

#include "cfpc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "cfpc/channel_pilots.hpp"
#include "cfpc/log.hpp"

namespace cfpc {

namespace {

std::seed_seq stream_seed(std::uint64_t seed, std::uint32_t stream) {
  return std::seed_seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                       static_cast<std::uint32_t>(seed >> 32), stream};
}

constexpr std::uint32_t kFixedApStream = 0xffffffffu;

struct RealizationOutcome {
  bool skipped = false;
  std::string reason;
  std::vector<DriverResult> results;
};

RealizationOutcome run_realization(const ExperimentSpec& spec, int index) {
  RealizationOutcome out;
  const Scenario scenario = draw_scenario(spec.config, index);
  const auto serving = serving_sets_for(scenario.fading.beta, spec.config);
  try {
    for (Scheme s : spec.schemes)
      out.results.push_back(
          run_scheme(s, scenario.fading.beta, scenario.assignment, spec.config, serving));
  } catch (const InfeasibleError& e) {
    out.skipped = true;
    out.reason = e.what();
    out.results.clear();
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

}  // namespace

SummaryMetric parse_metric(const std::string& name) {
  if (name == "pooled") return SummaryMetric::kPooled;
  if (name == "minrate") return SummaryMetric::kMinRate;
  throw ConfigError("metric must be pooled or minrate, got '" + name + "'");
}

std::string to_string(SummaryMetric metric) {
  return metric == SummaryMetric::kPooled ? "pooled" : "minrate";
}

void ExperimentSpec::validate() const {
  config.validate();
  if (realizations < 1) throw ConfigError("realizations must be at least 1");
  if (schemes.empty()) throw ConfigError("at least one scheme is required");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  for (const auto& [m, n] : sweep)
    if (m < 1 || n < 1) throw ConfigError("sweep points need positive M and N");
  if (enforce_constant_antennas && !sweep.empty()) {
    const int total = sweep.front().first * sweep.front().second;
    for (const auto& [m, n] : sweep)
      if (m * n != total)
        throw ConfigError("sweep points must share the same total antenna count M*N");
  }
}

std::vector<CdfPoint> cdf(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("cdf of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  std::vector<CdfPoint> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = {samples[i], double(i + 1) / n};
  return out;
}

double percentile(std::vector<double> samples, double q) {
  if (samples.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("percentile level outside [0, 1]");
  std::sort(samples.begin(), samples.end());
  const auto n = samples.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * double(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return samples[rank - 1];
}

Scenario draw_scenario(const SimulationConfig& config, int index) {
  auto seq = stream_seed(config.rng_seed, static_cast<std::uint32_t>(index));
  Rng rng(seq);
  Scenario s;
  s.topology.area_side_km = config.area_side_km;
  if (config.fixed_topology) {
    auto ap_seq = stream_seed(config.rng_seed, kFixedApStream);
    Rng ap_rng(ap_seq);
    s.topology.ap_positions = draw_uniform_points(config.num_aps, config.area_side_km, ap_rng);
  } else {
    s.topology.ap_positions = draw_uniform_points(config.num_aps, config.area_side_km, rng);
  }
  s.topology.ue_positions = draw_uniform_points(config.num_users, config.area_side_km, rng);
  s.fading = large_scale_fading(s.topology, config, rng);
  s.assignment = assign_pilots_random(config.num_users, config.tau_p, rng);
  s.sigma2 = noise_power_w(config);
  return s;
}

StatsSummary summarize(const std::vector<Sample>& samples, const std::vector<Scheme>& schemes,
                       int realizations, int skipped, SummaryMetric metric) {
  StatsSummary summary;
  summary.realizations = realizations;
  summary.skipped = skipped;
  summary.metric = metric;
  for (Scheme s : schemes) {
    std::vector<double> pooled;
    std::map<int, double> min_per_realization;
    for (const Sample& x : samples) {
      if (x.scheme != s) continue;
      pooled.push_back(x.se);
      auto [it, inserted] = min_per_realization.emplace(x.realization, x.se);
      if (!inserted) it->second = std::min(it->second, x.se);
    }
    SchemeSummary out;
    out.skipped = skipped;
    out.n_samples = pooled.size();
    if (!pooled.empty()) {
      std::vector<double> minima;
      for (const auto& [r, v] : min_per_realization) minima.push_back(v);
      out.pooled_median_se = percentile(pooled, 0.5);
      out.median_min_se = percentile(minima, 0.5);
      out.p5_se = percentile(pooled, 0.05);
      out.p95_se = percentile(pooled, 0.95);
      out.mean_se = mean(pooled);
      out.median_se = metric == SummaryMetric::kPooled ? out.pooled_median_se : out.median_min_se;
    }
    summary.schemes[s] = out;
  }
  return summary;
}

std::string raw_csv(const std::vector<Sample>& samples) {
  std::string out = kRawCsvHeader;
  out += '\n';
  for (const Sample& s : samples) {
    out += std::to_string(s.realization) + ',' + to_string(s.scheme) + ',' +
           std::to_string(s.user) + ',' + format_double(s.se) + ',' +
           format_double(s.pilot_power) + ',' + format_double(s.data_power) + ',' +
           format_double(s.sinr) + '\n';
  }
  return out;
}

std::vector<Sample> parse_raw_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kRawCsvHeader)
    throw std::runtime_error("raw CSV header mismatch: '" + line + "'");
  std::vector<Sample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(row, field, ',')) f.push_back(field);
    if (f.size() != 7) throw std::runtime_error("raw CSV row with " + std::to_string(f.size()) + " fields");
    Sample s;
    s.realization = std::stoi(f[0]);
    s.scheme = parse_scheme(f[1]);
    s.user = std::stoi(f[2]);
    s.se = std::stod(f[3]);
    s.pilot_power = std::stod(f[4]);
    s.data_power = std::stod(f[5]);
    s.sinr = std::stod(f[6]);
    out.push_back(s);
  }
  return out;
}

nlohmann::json summary_json(const StatsSummary& summary, const ExperimentSpec& spec,
                            const std::vector<RunRecord>& runs) {
  nlohmann::json doc;
  for (const auto& [scheme, s] : summary.schemes) {
    doc[to_string(scheme)] = {{"median_se", s.median_se},
                              {"p5_se", s.p5_se},
                              {"p95_se", s.p95_se},
                              {"mean_se", s.mean_se},
                              {"pooled_median_se", s.pooled_median_se},
                              {"median_min_se", s.median_min_se},
                              {"n_samples", s.n_samples},
                              {"skipped", s.skipped}};
  }
  nlohmann::json schemes = nlohmann::json::array();
  for (Scheme s : spec.schemes) schemes.push_back(to_string(s));
  doc["meta"] = {{"config", config_to_json(spec.config)},
                 {"seed", spec.config.rng_seed},
                 {"realizations", summary.realizations},
                 {"skipped", summary.skipped},
                 {"metric", to_string(summary.metric)},
                 {"schemes", schemes},
                 {"noise_stat", to_string(spec.config.noise_stat)}};
  for (Scheme scheme : spec.schemes) {
    int count = 0;
    int converged = 0;
    double iterations = 0.0;
    double worst_slack = std::numeric_limits<double>::infinity();
    for (const RunRecord& r : runs) {
      if (r.scheme != scheme) continue;
      ++count;
      converged += r.converged ? 1 : 0;
      iterations += r.outer_iterations;
      worst_slack = std::min(worst_slack, r.budget_slack);
    }
    if (count == 0) continue;
    doc["meta"]["runs"][to_string(scheme)] = {{"count", count},
                                              {"converged", converged},
                                              {"mean_outer_iterations", iterations / count},
                                              {"min_budget_slack", worst_slack}};
  }
  return doc;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  log_info("noise statistic: " + to_string(spec.config.noise_stat) +
           ", baseline pilot energy fraction: " +
           std::to_string(spec.config.pilot_energy_fraction()) +
           ", IPPA start: " + to_string(spec.config.ippa_init));

  std::vector<RealizationOutcome> outcomes(static_cast<std::size_t>(spec.realizations));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < spec.realizations; i = next++) outcomes[i] = run_realization(spec, i);
  };
  if (spec.threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < spec.threads; ++t) pool.emplace_back(worker);
  }

  // Merge in realization order so the output does not depend on scheduling.
  ExperimentResult result;
  int skipped = 0;
  for (int i = 0; i < spec.realizations; ++i) {
    const RealizationOutcome& o = outcomes[i];
    if (o.skipped) {
      ++skipped;
      result.skip_reasons.push_back("realization " + std::to_string(i) + ": " + o.reason);
      log_warn("skipping " + result.skip_reasons.back());
      continue;
    }
    for (const DriverResult& r : o.results) {
      const auto& st = r.power_state;
      for (Eigen::Index k = 0; k < st.p_pilot.size(); ++k)
        result.samples.push_back({i, r.scheme, static_cast<int>(k), r.se_report.se(k),
                                  st.p_pilot(k), st.p_data(k), r.se_report.sinr(k)});
      result.runs.push_back({i, r.scheme, r.outer_iterations, r.converged,
                             r.trace.empty() ? 0.0 : r.trace.back().delta_data_norm,
                             budget_slack(st, spec.config), r.se_report.se.minCoeff()});
    }
  }
  result.summary =
      summarize(result.samples, spec.schemes, spec.realizations, skipped, spec.metric);

  if (!spec.output_dir.empty()) {
    const std::filesystem::path dir(spec.output_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "raw.csv", raw_csv(result.samples));
    write_file(dir / "summary.json", summary_json(result.summary, spec, result.runs).dump(2) + "\n");
  }
  return result;
}

std::vector<SweepPointResult> run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<SweepPointResult> out;
  nlohmann::json index = nlohmann::json::array();
  for (const auto& [m, n] : spec.sweep) {
    ExperimentSpec point = spec;
    point.sweep.clear();
    point.config.num_aps = m;
    point.config.antennas_per_ap = n;
    if (point.config.top_l_aps > m) point.config.top_l_aps = m;
    const std::string name = "M" + std::to_string(m) + "_N" + std::to_string(n);
    if (!spec.output_dir.empty())
      point.output_dir = (std::filesystem::path(spec.output_dir) / name).string();
    log_info("sweep point " + name);
    out.push_back({m, n, run_experiment(point)});
    nlohmann::json entry = {{"num_aps", m}, {"antennas_per_ap", n}, {"dir", name}};
    for (const auto& [scheme, s] : out.back().result.summary.schemes)
      entry["median_se"][to_string(scheme)] = s.median_se;
    index.push_back(entry);
  }
  if (!spec.output_dir.empty())
    write_file(std::filesystem::path(spec.output_dir) / "sweep.json", index.dump(2) + "\n");
  return out;
}

}  // namespace cfpc
