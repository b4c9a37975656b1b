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

#include "doctest.h"

#include <cmath>

#include "evtp/allocator.hpp"
#include "evtp/errors.hpp"
#include "evtp/runner.hpp"
#include "evtp/units.hpp"

using namespace evtp;
using namespace evtp::allocator;

namespace {

struct Case {
  runner::Scenario sc;
  AllocConfig ac;
};

Case make_case(int antennas, int users, std::uint64_t seed, precoding::Method method = precoding::Method::mrt) {
  ScenarioConfig cfg;
  cfg.antennas = antennas;
  cfg.users = users;
  cfg.pilot_length = users;
  cfg.method = method;
  cfg.error_samples = 10000;
  return {runner::make_scenario(cfg, seed), cfg.alloc_config()};
}

// O_UB of user k at the given precoders, recomputed from scratch.
double recomputed_bound(const Case& c, const precoding::PrecoderSet& ps, std::size_t k) {
  const auto hyp = channel::perturbed_channel_set(c.sc.estimates[k], c.sc.errors[k]);
  const auto s = precoding::sinr_samples(ps, hyp, k, c.ac.noise);
  const auto t = evt::tail_outage(s, c.ac.sinr_targets[k], c.ac.tail);
  return t.phi <= t.mu ? std::max(t.upper, t.exceed_fraction_at_target) : t.upper;
}

}  // namespace

TEST_CASE("unreachable target exhausts the budget") {
  auto c = make_case(8, 1, 1);
  c.ac.sinr_targets = {1e15};
  const auto r = allocate(c.sc.estimates, c.sc.errors, c.ac);
  CHECK_FALSE(r.feasible);
  CHECK(r.total_power > c.ac.p_max);
  CHECK(r.iterations <= static_cast<long long>(std::ceil((c.ac.p_max - c.ac.p_min) / c.ac.delta_p)));
}

TEST_CASE("p_max equal to p_min is infeasible") {
  auto c = make_case(8, 1, 2);
  c.ac.p_max = c.ac.p_min;
  CHECK_FALSE(allocate(c.sc.estimates, c.sc.errors, c.ac).feasible);
}

TEST_CASE("feasible results meet every target at the returned powers") {
  int feasible = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    for (auto method : {precoding::Method::mrt, precoding::Method::zf}) {
      const auto c = make_case(8, 3, seed, method);
      const auto r = allocate(c.sc.estimates, c.sc.errors, c.ac);
      if (!r.feasible) {
        CHECK(r.total_power > c.ac.p_max);
        continue;
      }
      ++feasible;
      CHECK(r.total_power <= c.ac.p_max);
      for (std::size_t k = 0; k < 3; ++k) {
        CHECK(r.users[k].outage_upper <= c.ac.outage_targets[k]);
        CHECK(recomputed_bound(c, r.precoders, k) <= c.ac.outage_targets[k]);
        if (r.precoders.powers[k] > c.ac.p_min) {
          CHECK(r.users[k].last_failing_upper > c.ac.outage_targets[k]);
        }
      }
    }
  CHECK(feasible >= 4);
}

TEST_CASE("trajectory minimality for a single user") {
  auto c = make_case(8, 1, 3);
  c.ac.record_trajectory = true;
  const auto r = allocate(c.sc.estimates, c.sc.errors, c.ac);
  REQUIRE(r.feasible);
  const double p = r.precoders.powers[0];
  CHECK(r.users[0].last_failing_power == doctest::Approx(p - c.ac.delta_p).epsilon(1e-12));
  CHECK(r.users[0].last_failing_upper > c.ac.outage_targets[0]);

  precoding::PrecoderSet below = r.precoders;
  below.powers[0] -= c.ac.delta_p;
  CHECK(recomputed_bound(c, below, 0) > c.ac.outage_targets[0]);
}

TEST_CASE("single user bound is nonincreasing along tested powers") {
  auto c = make_case(8, 1, 4);
  c.ac.record_trajectory = true;
  c.ac.step_mode = StepMode::literal;
  c.ac.delta_p = units::dbm_to_watts(-15.0);
  const auto r = allocate(c.sc.estimates, c.sc.errors, c.ac);
  REQUIRE(r.feasible);
  REQUIRE(r.trajectory.size() > 3);
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
    CHECK(r.trajectory[i].power >= r.trajectory[i - 1].power);
    CHECK(r.trajectory[i].outage_upper <= r.trajectory[i - 1].outage_upper + 1e-12);
  }
}

TEST_CASE("jump and literal stepping agree") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (int users : {1, 2}) {
      auto c = make_case(8, users, seed, users == 1 ? precoding::Method::mrt : precoding::Method::zf);
      c.ac.delta_p = units::dbm_to_watts(-15.0);
      auto lit = c.ac;
      lit.step_mode = StepMode::literal;
      const auto a = allocate(c.sc.estimates, c.sc.errors, c.ac);
      const auto b = allocate(c.sc.estimates, c.sc.errors, lit);
      CHECK(a.feasible == b.feasible);
      CHECK(a.precoders.powers == b.precoders.powers);
      CHECK(a.iterations == b.iterations);
    }
  }
}

TEST_CASE("tighter outage target needs at least as much power") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    ScenarioConfig cfg;
    cfg.error_samples = 100000;
    const auto sc = runner::make_scenario(cfg, seed);
    auto ac = cfg.alloc_config();
    const auto loose = allocate(sc.estimates, sc.errors, ac);
    ac.outage_targets = {1e-5};
    const auto tight = allocate(sc.estimates, sc.errors, ac);
    REQUIRE(loose.feasible);
    REQUIRE(tight.feasible);
    CHECK(tight.precoders.powers[0] >= loose.precoders.powers[0]);
  }
}

TEST_CASE("perfect CSI limit") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ScenarioConfig cfg;
    auto sc = runner::make_scenario(cfg, seed);
    const auto ac = cfg.alloc_config();
    channel::EstimationSpec tiny = cfg.estimation();
    tiny.noise_power = 1e-30 * tiny.uplink_power * tiny.pilot_length;
    Rng rng(seed);
    sc.errors[0] = channel::draw_error_set(tiny, cfg.error_samples, cfg.antennas, rng);
    const auto r = allocate(sc.estimates, sc.errors, ac);
    REQUIRE(r.feasible);
    const double exact = ac.sinr_targets[0] * ac.noise / sc.estimates[0].squaredNorm();
    CHECK(r.precoders.powers[0] >= exact * (1 - 1e-6));
    CHECK(r.precoders.powers[0] <= exact + ac.delta_p);
  }
}

TEST_CASE("configuration errors") {
  auto c = make_case(8, 1, 1);
  auto bad = c.ac;
  bad.outage_targets = {};
  CHECK_THROWS_AS(allocate(c.sc.estimates, c.sc.errors, bad), ConfigError);
  bad = c.ac;
  bad.delta_p = 0.0;
  CHECK_THROWS_AS(allocate(c.sc.estimates, c.sc.errors, bad), ConfigError);
  CHECK_THROWS_AS(allocate(c.sc.estimates, {}, c.ac), ConfigError);
}
