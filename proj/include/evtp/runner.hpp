// Copyright 2026 The evtp Authors
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

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "evtp/allocator.hpp"
#include "evtp/channel.hpp"
#include "evtp/config.hpp"
#include "evtp/montecarlo.hpp"

namespace evtp::runner {

// Everything drawn for one scenario seed.
struct Scenario {
  std::vector<CMatrix> correlations;
  ChannelList channels;   // true h_k
  ChannelList estimates;  // LS estimates
  std::vector<channel::ErrorSet> errors;
};

// Deterministic in (config, seed). Geometry, channels, pilot noise and error
// sets each use their own named substream.
Scenario make_scenario(const ScenarioConfig& config, std::uint64_t seed);

// One output record. Per-user fields hold one entry per user.
struct ResultRow {
  std::string sweep_var;
  std::string sweep_value;
  std::string seed;
  std::vector<double> power_dbm;
  double total_power_dbm = 0.0;
  std::vector<double> outage_ub;
  std::vector<double> outage_lb;
  std::vector<double> empirical_outage;
  double feasible = 0.0;   // 0/1 for runs, feasible fraction for aggregates
  double iterations = 0.0;
  double wall_time_s = 0.0;
  // Not emitted; used to re-check feasible rows when written.
  std::vector<double> outage_targets;
  bool aggregate = false;
};

struct RunOptions {
  bool timing = false;  // record wall time; off keeps output byte-reproducible
  std::optional<long long> trials;  // overrides config.trials
};

ResultRow run_allocate(const ScenarioConfig& config, std::uint64_t seed, const RunOptions& opts = {});

// Same as run_allocate but also hands back the allocation itself.
struct AllocateRun {
  ResultRow row;
  allocator::AllocationResult allocation;
  Scenario scenario;
};
AllocateRun run_allocate_full(const ScenarioConfig& config, std::uint64_t seed, const RunOptions& opts = {});

enum class SweepAxis { tau_e, zeta, gamma_conf, users, samples };
SweepAxis parse_axis(const std::string& name);
std::string to_string(SweepAxis axis);
ScenarioConfig apply_axis(ScenarioConfig config, SweepAxis axis, double value);

// Seed of scenario s within a sweep rooted at `master`.
std::uint64_t scenario_seed(std::uint64_t master, int index);

// One row per (value, seed), followed by mean / median / iqr aggregate rows
// for each value.
std::vector<ResultRow> run_sweep(const ScenarioConfig& config, SweepAxis axis,
                                 const std::vector<double>& values, int seeds, const RunOptions& opts = {});

// Paired EVT and worst-case rows per seed, both checked by Monte Carlo.
struct BenchmarkOptions {
  int seeds = 1;
  std::optional<double> radius;  // overrides the empirical radius rule
  RunOptions run;
};
std::vector<ResultRow> run_benchmark_compare(const ScenarioConfig& config, const BenchmarkOptions& opts = {});

// Fixed-channel estimation experiment.
struct Fig2Case {
  int pilot_length = 1;
  double power_dbm = 23.0;
  long long trials = 1000000;
};

struct Fig2Options {
  CVector channel;                 // defaults to the reference 4-antenna vector
  double uplink_power_dbm = 20.0;
  double target_db = 10.0;
  double bandwidth_hz = 60e3;
  double noise_figure_db = 7.0;
  std::optional<double> noise_dbm;  // overrides bandwidth / noise figure
  std::vector<Fig2Case> cases{{1, 23.0, 1000000}, {2, 23.0, 1000000}, {1, 26.0, 1000000}, {2, 26.0, 1000000}};
  std::uint64_t seed = 1;
  montecarlo::EstimationPath path = montecarlo::EstimationPath::ls_pilots;
  double hist_lo_db = -10.0;
  double hist_hi_db = 30.0;
  int hist_bins = 200;
};

struct Fig2Result {
  Fig2Case setup;
  double noise_dbm = 0.0;
  double fraction = 0.0;
  montecarlo::Histogram histogram;
};

CVector reference_fig2_channel();
std::vector<Fig2Result> run_fig2(const Fig2Options& opts);

// Output.
std::vector<std::string> csv_header();
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
nlohmann::ordered_json to_json(const ResultRow& row);
void write_json(std::ostream& os, const std::vector<ResultRow>& rows);
std::string fig2_csv(const std::vector<Fig2Result>& results);
std::string fig2_histogram_csv(const std::vector<Fig2Result>& results);
nlohmann::ordered_json fig2_json(const std::vector<Fig2Result>& results);

// Checks feasible rows against their targets; throws Error on violation.
void check_row(const ResultRow& row);

}  // namespace evtp::runner
