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

// cfpc command line: Monte-Carlo experiments and a wall-clock scaling bench.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cfpc/experiment.hpp"
#include "cfpc/log.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<std::pair<int, int>> parse_sweep(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  for (const std::string& point : split(text, ',')) {
    const auto x = point.find('x');
    if (x == std::string::npos) throw cfpc::ConfigError("sweep point '" + point + "' is not MxN");
    try {
      std::size_t used_m = 0;
      std::size_t used_n = 0;
      const int m = std::stoi(point.substr(0, x), &used_m);
      const int n = std::stoi(point.substr(x + 1), &used_n);
      if (used_m != x || used_n != point.size() - x - 1) throw std::invalid_argument(point);
      out.emplace_back(m, n);
    } catch (const std::logic_error&) {
      throw cfpc::ConfigError("sweep point '" + point + "' is not MxN");
    }
  }
  if (out.empty()) throw cfpc::ConfigError("empty sweep");
  return out;
}

void print_summary(const cfpc::StatsSummary& summary) {
  std::printf("%-5s %10s %10s %10s %10s %8s\n", "", "median", "p5", "p95", "mean", "samples");
  for (const auto& [scheme, s] : summary.schemes)
    std::printf("%-5s %10.4g %10.4g %10.4g %10.4g %8zu\n", cfpc::to_string(scheme).c_str(),
                s.median_se, s.p5_se, s.p95_se, s.mean_se, s.n_samples);
  if (summary.skipped > 0)
    std::printf("skipped realizations: %d of %d\n", summary.skipped, summary.realizations);
}

struct RunArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int realizations = 100;
  std::string schemes = "ippa,nppa,cppa,fppa";
  std::string out_dir;
  std::string sweep;
  std::string metric = "pooled";
  int threads = 1;
  bool allow_any_sweep = false;
};

int run_command(const RunArgs& args) {
  cfpc::ExperimentSpec spec;
  spec.config = args.config_path.empty() ? cfpc::SimulationConfig{}
                                         : cfpc::load_config(args.config_path);
  if (args.seed) spec.config.rng_seed = *args.seed;
  spec.realizations = args.realizations;
  spec.schemes.clear();
  for (const std::string& name : split(args.schemes, ','))
    spec.schemes.push_back(cfpc::parse_scheme(name));
  spec.output_dir = args.out_dir;
  spec.metric = cfpc::parse_metric(args.metric);
  spec.threads = args.threads;
  spec.enforce_constant_antennas = !args.allow_any_sweep;
  if (!args.sweep.empty()) spec.sweep = parse_sweep(args.sweep);
  spec.validate();

  if (spec.sweep.empty()) {
    const cfpc::ExperimentResult r = cfpc::run_experiment(spec);
    print_summary(r.summary);
    return r.summary.skipped == r.summary.realizations ? kExitInfeasible : kExitOk;
  }
  int status = kExitOk;
  for (const auto& point : cfpc::run_sweep(spec)) {
    std::printf("M=%d N=%d\n", point.num_aps, point.antennas);
    print_summary(point.result.summary);
    if (point.result.summary.skipped == point.result.summary.realizations) status = kExitInfeasible;
  }
  return status;
}

struct BenchArgs {
  std::string config_path;
  std::string aps = "25,50,100,200";
  int repeats = 3;
  std::string scheme = "ippa";
};

int bench_command(const BenchArgs& args) {
  cfpc::SimulationConfig base = args.config_path.empty() ? cfpc::SimulationConfig{}
                                                         : cfpc::load_config(args.config_path);
  const cfpc::Scheme scheme = cfpc::parse_scheme(args.scheme);
  std::printf("%6s %6s %6s %12s %10s\n", "M", "N", "K", "seconds", "outer");
  for (const std::string& m_text : split(args.aps, ',')) {
    cfpc::SimulationConfig config = base;
    config.num_aps = std::stoi(m_text);
    config.validate();
    double seconds = 0.0;
    double outer = 0.0;
    for (int r = 0; r < args.repeats; ++r) {
      const cfpc::Scenario s = cfpc::draw_scenario(config, r);
      const auto serving = cfpc::serving_sets_for(s.fading.beta, config);
      const auto t0 = std::chrono::steady_clock::now();
      const cfpc::DriverResult d =
          cfpc::run_scheme(scheme, s.fading.beta, s.assignment, config, serving);
      seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      outer += d.outer_iterations;
    }
    std::printf("%6d %6d %6d %12.4f %10.2f\n", config.num_aps, config.antennas_per_ap,
                config.num_users, seconds / args.repeats, outer / args.repeats);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-free massive MIMO pilot and data power control simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "debug, info, warn or off")
      ->check(CLI::IsMember({"debug", "info", "warn", "off"}));

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a Monte-Carlo experiment or an (M, N) sweep");
  run_cmd->add_option("--config", run.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run.seed, "Override the configured RNG seed");
  run_cmd->add_option("--realizations", run.realizations, "Number of network realizations");
  run_cmd->add_option("--schemes", run.schemes, "Comma-separated subset of ippa,nppa,cppa,fppa");
  run_cmd->add_option("--out", run.out_dir, "Directory for raw.csv and summary.json");
  run_cmd->add_option("--sweep", run.sweep, "Comma-separated MxN points, e.g. 100x1,50x2,25x4");
  run_cmd->add_option("--metric", run.metric, "pooled or minrate")
      ->check(CLI::IsMember({"pooled", "minrate"}));
  run_cmd->add_option("--threads", run.threads, "Worker threads")
      ->default_val(std::max(1u, std::thread::hardware_concurrency()));
  run_cmd->add_flag("--allow-any-sweep", run.allow_any_sweep,
                    "Do not require a constant M*N across sweep points");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Wall-clock time of one scheme versus M");
  bench_cmd->add_option("--config", bench.config_path, "JSON configuration file")
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--aps", bench.aps, "Comma-separated AP counts");
  bench_cmd->add_option("--repeats", bench.repeats, "Realizations per point");
  bench_cmd->add_option("--scheme", bench.scheme, "Scheme to time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (log_level == "debug") cfpc::set_log_level(cfpc::LogLevel::kDebug);
  if (log_level == "info") cfpc::set_log_level(cfpc::LogLevel::kInfo);
  if (log_level == "off") cfpc::set_log_level(cfpc::LogLevel::kOff);

  try {
    if (*run_cmd) return run_command(run);
    return bench_command(bench);
  } catch (const cfpc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cfpc::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
