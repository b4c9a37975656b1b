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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evtp/config.hpp"
#include "evtp/errors.hpp"
#include "evtp/montecarlo.hpp"
#include "evtp/rng.hpp"
#include "evtp/runner.hpp"

namespace {

using namespace evtp;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<long long> trials;
  std::string format = "csv";
  bool timing = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON scenario file");
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--out", c.out, "output file (default stdout)");
  app->add_option("--trials", c.trials, "Monte Carlo trials")->check(CLI::NonNegativeNumber);
  app->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}));
  app->add_flag("--timing", c.timing, "record wall time per row");
}

ScenarioConfig load(const Common& c) {
  ScenarioConfig cfg = c.config_path.empty() ? ScenarioConfig{} : ScenarioConfig::from_file(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  if (c.trials) cfg.trials = *c.trials;
  cfg.validate();
  return cfg;
}

runner::RunOptions run_options(const Common& c) { return {.timing = c.timing, .trials = c.trials}; }

template <class F>
void emit(const Common& c, F&& write) {
  if (c.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream os(c.out);
  if (!os) throw ConfigError("cannot open output file '" + c.out + "'");
  write(os);
  if (!os) throw ConfigError("write failed: '" + c.out + "'");
}

void emit_rows(const Common& c, const std::vector<runner::ResultRow>& rows) {
  emit(c, [&](std::ostream& os) {
    if (c.format == "json")
      runner::write_json(os, rows);
    else
      runner::write_csv(os, rows);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EVT-based robust downlink power allocation"};
  app.require_subcommand(1);

  Common alloc_c;
  auto* alloc = app.add_subcommand("allocate", "allocate one scenario and verify by Monte Carlo");
  add_common(alloc, alloc_c);

  Common sweep_c;
  std::string axis;
  std::vector<double> values;
  std::optional<int> sweep_seeds;
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter over scenario seeds");
  add_common(sweep, sweep_c);
  sweep->add_option("--axis", axis, "tau_e | zeta | gamma_conf | K | N")->required();
  sweep->add_option("--values", values, "sweep values")->delimiter(',');
  sweep->add_option("--seeds", sweep_seeds, "scenario seeds (default: scenario_seeds)")->check(CLI::PositiveNumber);

  Common fig2_c;
  std::string hist_out;
  std::optional<double> noise_dbm;
  int bins = 200;
  std::string path = "ls";
  bool long_run = false;
  auto* fig2 = app.add_subcommand("fig2", "fixed-channel estimation sweep");
  add_common(fig2, fig2_c);
  fig2->add_option("--hist", hist_out, "histogram CSV output");
  fig2->add_option("--bins", bins)->check(CLI::PositiveNumber);
  fig2->add_option("--noise-dbm", noise_dbm, "override the thermal noise power");
  fig2->add_option("--path", path)->check(CLI::IsMember({"ls", "additive"}));
  fig2->add_flag("--long", long_run, "use 1e7 trials for the tau_e=2, 26 dBm case");

  Common bench_c;
  int bench_seeds = 1;
  std::optional<double> radius;
  auto* bench = app.add_subcommand("benchmark", "EVT vs worst-case single-user power");
  add_common(bench, bench_c);
  bench->add_option("--seeds", bench_seeds)->check(CLI::PositiveNumber);
  bench->add_option("--radius", radius, "worst-case radius (default: empirical rule)")->check(CLI::NonNegativeNumber);

  Common verify_c;
  auto* verify = app.add_subcommand("verify", "allocate, then re-check against an independent Monte Carlo run");
  add_common(verify, verify_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*alloc) {
      const auto cfg = load(alloc_c);
      emit_rows(alloc_c, {runner::run_allocate(cfg, cfg.seed, run_options(alloc_c))});
    } else if (*sweep) {
      const auto cfg = load(sweep_c);
      const auto ax = runner::parse_axis(axis);
      emit_rows(sweep_c, runner::run_sweep(cfg, ax, values, sweep_seeds.value_or(cfg.scenario_seeds),
                                           run_options(sweep_c)));
    } else if (*fig2) {
      runner::Fig2Options o;
      if (fig2_c.seed) o.seed = *fig2_c.seed;
      o.noise_dbm = noise_dbm;
      o.hist_bins = bins;
      o.path = path == "ls" ? montecarlo::EstimationPath::ls_pilots : montecarlo::EstimationPath::additive;
      if (long_run) o.cases.back().trials = 10000000;
      if (fig2_c.trials)
        for (auto& c : o.cases) c.trials = *fig2_c.trials;
      const auto res = runner::run_fig2(o);
      emit(fig2_c, [&](std::ostream& os) {
        if (fig2_c.format == "json")
          os << runner::fig2_json(res).dump(2) << '\n';
        else
          os << runner::fig2_csv(res);
      });
      if (!hist_out.empty()) {
        std::ofstream hs(hist_out);
        if (!hs) throw ConfigError("cannot open histogram file '" + hist_out + "'");
        hs << runner::fig2_histogram_csv(res);
      }
    } else if (*bench) {
      const auto cfg = load(bench_c);
      runner::BenchmarkOptions o{.seeds = bench_seeds, .radius = radius, .run = run_options(bench_c)};
      emit_rows(bench_c, runner::run_benchmark_compare(cfg, o));
    } else if (*verify) {
      const auto cfg = load(verify_c);
      auto opts = run_options(verify_c);
      opts.trials = 0;
      auto run = runner::run_allocate_full(cfg, cfg.seed, opts);
      const auto ac = cfg.alloc_config();
      if (run.allocation.feasible) {
        const auto mc = montecarlo::empirical_outage(run.allocation.precoders, run.scenario.estimates,
                                                     cfg.estimation(), ac.sinr_targets, ac.noise, cfg.trials,
                                                     substream_seed(cfg.seed, "verify"));
        run.row.empirical_outage = mc.fractions();
        for (std::size_t k = 0; k < mc.outages.size(); ++k)
          std::cerr << "user " << k << ": bound " << run.row.outage_ub[k] << ", empirical " << mc.fraction(k)
                    << ", target " << ac.outage_targets[k]
                    << (mc.fraction(k) <= ac.outage_targets[k] ? "  ok" : "  EXCEEDED") << '\n';
      } else {
        std::cerr << "infeasible within the power budget\n";
      }
      emit_rows(verify_c, {run.row});
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
