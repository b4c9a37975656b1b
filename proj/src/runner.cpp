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

#include "evtp/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "evtp/benchmark.hpp"
#include "evtp/errors.hpp"
#include "evtp/rng.hpp"
#include "evtp/units.hpp"

namespace evtp::runner {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double watts_to_dbm_or_nan(double w) { return w > 0.0 ? units::watts_to_dbm(w) : kNaN; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_number(v[i]);
  }
  return out;
}

std::string format_value(double v) { return format_number(v); }

// Linear-interpolation sample quantile of the finite entries.
double quantile(std::vector<double> v, double q) {
  std::erase_if(v, [](double x) { return !std::isfinite(x); });
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  int n = 0;
  for (double x : v)
    if (std::isfinite(x)) {
      s += x;
      ++n;
    }
  return n ? s / n : kNaN;
}

enum class Stat { mean, median, iqr };

double reduce(const std::vector<double>& v, Stat stat) {
  switch (stat) {
    case Stat::mean:
      return mean(v);
    case Stat::median:
      return quantile(v, 0.5);
    case Stat::iqr:
      return quantile(v, 0.75) - quantile(v, 0.25);
  }
  return kNaN;
}

// Aggregates over the feasible runs; the feasible column is the fraction of
// feasible runs among all of them.
std::vector<ResultRow> aggregate(const std::vector<ResultRow>& runs) {
  if (runs.empty()) return {};
  std::vector<const ResultRow*> ok;
  for (const auto& r : runs)
    if (r.feasible > 0.5) ok.push_back(&r);
  const std::size_t users = runs.front().power_dbm.size();

  auto column = [&](auto getter) {
    std::vector<double> v;
    for (const auto* r : ok) v.push_back(getter(*r));
    return v;
  };
  std::vector<double> feas;
  for (const auto& r : runs) feas.push_back(r.feasible);

  std::vector<ResultRow> out;
  for (auto [stat, name] : {std::pair{Stat::mean, "mean"}, std::pair{Stat::median, "median"},
                            std::pair{Stat::iqr, "iqr"}}) {
    ResultRow a;
    a.aggregate = true;
    a.sweep_var = runs.front().sweep_var;
    a.sweep_value = runs.front().sweep_value;
    a.seed = name;
    for (std::size_t k = 0; k < users; ++k) {
      a.power_dbm.push_back(reduce(column([k](const ResultRow& r) { return r.power_dbm[k]; }), stat));
      a.outage_ub.push_back(reduce(column([k](const ResultRow& r) { return r.outage_ub[k]; }), stat));
      a.outage_lb.push_back(reduce(column([k](const ResultRow& r) { return r.outage_lb[k]; }), stat));
      a.empirical_outage.push_back(
          reduce(column([k](const ResultRow& r) { return r.empirical_outage[k]; }), stat));
    }
    a.total_power_dbm = reduce(column([](const ResultRow& r) { return r.total_power_dbm; }), stat);
    a.feasible = stat == Stat::iqr ? reduce(feas, Stat::iqr) : reduce(feas, stat);
    a.iterations = reduce(column([](const ResultRow& r) { return r.iterations; }), stat);
    a.wall_time_s = reduce(column([](const ResultRow& r) { return r.wall_time_s; }), stat);
    out.push_back(std::move(a));
  }
  return out;
}

long long trials_of(const ScenarioConfig& config, const RunOptions& opts) {
  return opts.trials.value_or(config.trials);
}

}  // namespace

Scenario make_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const int m = config.antennas;
  const double beta = units::db_to_linear(config.gain_db);
  Scenario sc;
  for (int k = 0; k < config.users; ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    Rng geo = substream(seed, "geometry", uk);
    const double azimuth = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(geo);
    const channel::CorrelationSpec spec{.antennas = m,
                                        .gain = beta,
                                        .azimuth = azimuth,
                                        .angular_std = units::deg_to_rad(config.angular_std_deg),
                                        .clusters = config.clusters,
                                        .cluster_halfwidth = units::deg_to_rad(config.cluster_halfwidth_deg)};
    CMatrix r = channel::correlation_matrix(spec, geo);
    channel::FadingModel model = channel::CorrelatedRayleigh{r};
    if (config.channel_model == "rician")
      model = channel::Rician{.k_factor = units::db_to_linear(config.rician_k_db),
                              .correlation = r,
                              .gain = beta,
                              .los_phases = channel::ula_phases(m, azimuth)};
    Rng ch = substream(seed, "channel", uk);
    sc.channels.push_back(channel::sample_channel(model, ch));
    sc.correlations.push_back(std::move(r));
  }
  const auto est = config.estimation();
  Rng pilot_noise = substream(seed, "estimation");
  sc.estimates = channel::ls_estimate(sc.channels, channel::pilot_matrix(config.users, config.pilot_length),
                                      est, pilot_noise);
  for (int k = 0; k < config.users; ++k) {
    Rng er = substream(seed, "errors", static_cast<std::uint64_t>(k));
    sc.errors.push_back(channel::draw_error_set(est, config.error_samples, m, er));
  }
  return sc;
}

AllocateRun run_allocate_full(const ScenarioConfig& config, std::uint64_t seed, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  AllocateRun run;
  run.scenario = make_scenario(config, seed);
  const auto ac = config.alloc_config();
  run.allocation = allocator::allocate(run.scenario.estimates, run.scenario.errors, ac);
  const auto& alloc = run.allocation;

  ResultRow& row = run.row;
  row.seed = std::to_string(seed);
  row.outage_targets = ac.outage_targets;
  for (std::size_t k = 0; k < alloc.users.size(); ++k) {
    row.power_dbm.push_back(watts_to_dbm_or_nan(alloc.precoders.powers[k]));
    row.outage_ub.push_back(alloc.users[k].outage_upper);
    row.outage_lb.push_back(alloc.users[k].outage_lower);
  }
  row.total_power_dbm = watts_to_dbm_or_nan(alloc.total_power);
  row.feasible = alloc.feasible ? 1.0 : 0.0;
  row.iterations = static_cast<double>(alloc.iterations);

  const long long trials = trials_of(config, opts);
  if (alloc.feasible && trials > 0) {
    const auto mc = montecarlo::empirical_outage(alloc.precoders, run.scenario.estimates, config.estimation(),
                                                 ac.sinr_targets, ac.noise, trials,
                                                 substream_seed(seed, "montecarlo"));
    row.empirical_outage = mc.fractions();
  } else {
    row.empirical_outage.assign(alloc.users.size(), kNaN);
  }
  if (opts.timing)
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  check_row(row);
  return run;
}

ResultRow run_allocate(const ScenarioConfig& config, std::uint64_t seed, const RunOptions& opts) {
  return run_allocate_full(config, seed, opts).row;
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "tau_e") return SweepAxis::tau_e;
  if (name == "zeta") return SweepAxis::zeta;
  if (name == "gamma_conf") return SweepAxis::gamma_conf;
  if (name == "K") return SweepAxis::users;
  if (name == "N") return SweepAxis::samples;
  throw ConfigError("sweep: unknown axis '" + name + "' (tau_e, zeta, gamma_conf, K, N)");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::tau_e:
      return "tau_e";
    case SweepAxis::zeta:
      return "zeta";
    case SweepAxis::gamma_conf:
      return "gamma_conf";
    case SweepAxis::users:
      return "K";
    case SweepAxis::samples:
      return "N";
  }
  return "?";
}

ScenarioConfig apply_axis(ScenarioConfig config, SweepAxis axis, double value) {
  auto as_int = [&](const char* what) {
    if (value != std::floor(value)) throw ConfigError(std::string("sweep: ") + what + " must be an integer");
    return static_cast<int>(value);
  };
  switch (axis) {
    case SweepAxis::tau_e:
      config.pilot_length = as_int("tau_e");
      break;
    case SweepAxis::zeta:
      config.outage_targets = {value};
      break;
    case SweepAxis::gamma_conf:
      config.confidence = value;
      break;
    case SweepAxis::users:
      config.users = as_int("K");
      config.pilot_length = std::max(config.pilot_length, config.users);
      if (config.outage_targets.size() != 1) config.outage_targets.resize(1);
      break;
    case SweepAxis::samples:
      config.error_samples = as_int("N");
      break;
  }
  config.validate();
  return config;
}

std::uint64_t scenario_seed(std::uint64_t master, int index) {
  return substream_seed(master, "scenario", static_cast<std::uint64_t>(index));
}

std::vector<ResultRow> run_sweep(const ScenarioConfig& config, SweepAxis axis,
                                 const std::vector<double>& values, int seeds, const RunOptions& opts) {
  std::vector<ResultRow> out;
  for (double value : values) {
    const ScenarioConfig c = apply_axis(config, axis, value);
    std::vector<ResultRow> runs;
    for (int s = 0; s < seeds; ++s) {
      ResultRow row = run_allocate(c, scenario_seed(config.seed, s), opts);
      row.sweep_var = to_string(axis);
      row.sweep_value = format_value(value);
      runs.push_back(std::move(row));
    }
    auto agg = aggregate(runs);
    out.insert(out.end(), runs.begin(), runs.end());
    out.insert(out.end(), agg.begin(), agg.end());
  }
  return out;
}

std::vector<ResultRow> run_benchmark_compare(const ScenarioConfig& config_in, const BenchmarkOptions& opts) {
  ScenarioConfig config = config_in;
  config.users = 1;
  config.method = precoding::Method::mrt;
  if (config.outage_targets.size() != 1) config.outage_targets.resize(1);
  config.validate();
  const auto ac = config.alloc_config();
  const double zeta = ac.outage_targets[0];
  const long long trials = trials_of(config, opts.run);

  std::vector<ResultRow> evt_rows;
  std::vector<ResultRow> wc_rows;
  for (int s = 0; s < opts.seeds; ++s) {
    const std::uint64_t seed = opts.seeds == 1 ? config.seed : scenario_seed(config.seed, s);
    AllocateRun evt_run = run_allocate_full(config, seed, opts.run);
    evt_run.row.sweep_var = "method";
    evt_run.row.sweep_value = "evt";

    const auto t0 = std::chrono::steady_clock::now();
    ResultRow wc;
    wc.sweep_var = "method";
    wc.sweep_value = "worst_case";
    wc.seed = std::to_string(seed);
    wc.outage_targets = ac.outage_targets;
    wc.outage_ub = {kNaN};
    wc.outage_lb = {kNaN};
    wc.empirical_outage = {kNaN};
    wc.power_dbm = {kNaN};
    wc.total_power_dbm = kNaN;
    try {
      const auto& est = evt_run.scenario.estimates[0];
      const double radius = opts.radius ? *opts.radius : benchmark::radius_from_errors(evt_run.scenario.errors[0], zeta);
      const auto sol = benchmark::solve(est, {.radius = radius,
                                               .outage_target = zeta,
                                               .sinr_target = ac.sinr_targets[0],
                                               .noise = ac.noise});
      wc.power_dbm = {units::watts_to_dbm(sol.power)};
      wc.total_power_dbm = wc.power_dbm[0];
      wc.feasible = sol.power <= ac.p_max ? 1.0 : 0.0;
      if (trials > 0) {
        const precoding::PrecoderSet ps{{sol.direction}, {sol.power}};
        wc.empirical_outage = montecarlo::empirical_outage(ps, evt_run.scenario.estimates, config.estimation(),
                                                           ac.sinr_targets, ac.noise, trials,
                                                           substream_seed(seed, "montecarlo"))
                                  .fractions();
      }
    } catch (const InfeasibleError&) {
      wc.feasible = 0.0;
    }
    if (opts.run.timing)
      wc.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    evt_rows.push_back(std::move(evt_run.row));
    wc_rows.push_back(std::move(wc));
  }

  std::vector<ResultRow> out;
  for (std::size_t i = 0; i < evt_rows.size(); ++i) {
    out.push_back(evt_rows[i]);
    out.push_back(wc_rows[i]);
  }
  if (opts.seeds > 1) {
    auto a = aggregate(evt_rows);
    auto b = aggregate(wc_rows);
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

CVector reference_fig2_channel() {
  CVector h(4);
  h << cdouble{0.118, 0.501}, cdouble{0.145, 0.058}, cdouble{-0.051, 0.022}, cdouble{0.087, -0.176};
  return std::sqrt(1e-13) * h;
}

std::vector<Fig2Result> run_fig2(const Fig2Options& opts) {
  const CVector h = opts.channel.size() ? opts.channel : reference_fig2_channel();
  const double noise = opts.noise_dbm ? units::dbm_to_watts(*opts.noise_dbm)
                                      : units::thermal_noise_watts(opts.bandwidth_hz, opts.noise_figure_db);
  std::vector<Fig2Result> out;
  for (std::size_t i = 0; i < opts.cases.size(); ++i) {
    const auto& c = opts.cases[i];
    const channel::EstimationSpec spec{.uplink_power = units::dbm_to_watts(opts.uplink_power_dbm),
                                       .pilot_length = c.pilot_length,
                                       .noise_power = noise};
    montecarlo::SweepOptions so;
    so.path = opts.path;
    so.histogram = montecarlo::Histogram(opts.hist_lo_db, opts.hist_hi_db, opts.hist_bins);
    auto res = montecarlo::estimation_sweep(h, spec, units::dbm_to_watts(c.power_dbm),
                                            units::db_to_linear(opts.target_db), noise, c.trials,
                                            substream_seed(opts.seed, "fig2", i), std::move(so));
    out.push_back({c, units::watts_to_dbm(noise), res.fraction(), std::move(*res.histogram)});
  }
  return out;
}

std::vector<std::string> csv_header() {
  return {"sweep_var", "sweep_value",      "seed",     "power_dbm",  "total_power_dbm", "outage_ub",
          "outage_lb", "empirical_outage", "feasible", "iterations", "wall_time_s"};
}

void check_row(const ResultRow& row) {
  if (row.aggregate || row.feasible < 0.5) return;
  for (std::size_t k = 0; k < row.outage_ub.size() && k < row.outage_targets.size(); ++k)
    if (std::isfinite(row.outage_ub[k]) && !(row.outage_ub[k] <= row.outage_targets[k]))
      throw Error("result row: feasible row violates the outage target of user " + std::to_string(k));
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  const auto header = csv_header();
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    check_row(r);
    os << r.sweep_var << ',' << r.sweep_value << ',' << r.seed << ',' << format_list(r.power_dbm) << ','
       << format_number(r.total_power_dbm) << ',' << format_list(r.outage_ub) << ','
       << format_list(r.outage_lb) << ',' << format_list(r.empirical_outage) << ','
       << format_number(r.feasible) << ',' << format_number(r.iterations) << ','
       << format_number(r.wall_time_s) << '\n';
  }
}

namespace {

nlohmann::ordered_json num(double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr); }

nlohmann::ordered_json num_list(const std::vector<double>& v) {
  auto a = nlohmann::ordered_json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

}  // namespace

nlohmann::ordered_json to_json(const ResultRow& r) {
  return nlohmann::ordered_json{{"sweep_var", r.sweep_var},
                        {"sweep_value", r.sweep_value},
                        {"seed", r.seed},
                        {"power_dbm", num_list(r.power_dbm)},
                        {"total_power_dbm", num(r.total_power_dbm)},
                        {"outage_ub", num_list(r.outage_ub)},
                        {"outage_lb", num_list(r.outage_lb)},
                        {"empirical_outage", num_list(r.empirical_outage)},
                        {"feasible", num(r.feasible)},
                        {"iterations", num(r.iterations)},
                        {"wall_time_s", num(r.wall_time_s)}};
}

void write_json(std::ostream& os, const std::vector<ResultRow>& rows) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    check_row(r);
    a.push_back(to_json(r));
  }
  os << a.dump(2) << '\n';
}

std::string fig2_csv(const std::vector<Fig2Result>& results) {
  std::ostringstream os;
  os << "tau_e,power_dbm,trials,noise_dbm,below_target_fraction\n";
  for (const auto& r : results)
    os << r.setup.pilot_length << ',' << format_number(r.setup.power_dbm) << ',' << r.setup.trials << ','
       << format_number(r.noise_dbm) << ',' << format_number(r.fraction) << '\n';
  return os.str();
}

std::string fig2_histogram_csv(const std::vector<Fig2Result>& results) {
  std::ostringstream os;
  os << "tau_e,power_dbm,bin_lo_db,bin_hi_db,count\n";
  for (const auto& r : results) {
    const auto& h = r.histogram;
    for (int i = 0; i < h.bins; ++i)
      os << r.setup.pilot_length << ',' << format_number(r.setup.power_dbm) << ',' << format_number(h.edge(i))
         << ',' << format_number(h.edge(i + 1)) << ',' << h.counts[static_cast<std::size_t>(i)] << '\n';
  }
  return os.str();
}

nlohmann::ordered_json fig2_json(const std::vector<Fig2Result>& results) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& r : results)
    a.push_back({{"tau_e", r.setup.pilot_length},
                 {"power_dbm", r.setup.power_dbm},
                 {"trials", r.setup.trials},
                 {"noise_dbm", r.noise_dbm},
                 {"below_target_fraction", r.fraction},
                 {"histogram",
                  {{"lo_db", r.histogram.lo_db},
                   {"hi_db", r.histogram.hi_db},
                   {"counts", r.histogram.counts},
                   {"underflow", r.histogram.underflow},
                   {"overflow", r.histogram.overflow}}}});
  return a;
}

}  // namespace evtp::runner
