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

#include <cstdio>
#include <fstream>

#include "evtp/config.hpp"
#include "evtp/errors.hpp"
#include "evtp/units.hpp"

using namespace evtp;

TEST_CASE("default scenario parameters") {
  const ScenarioConfig c;
  c.validate();
  CHECK(units::watts_to_dbm(c.noise_power()) == doctest::Approx(-119.0184875).epsilon(1e-9));
  CHECK(c.sinr_target() == doctest::Approx(74.79).epsilon(1e-3));
  const auto a = c.alloc_config();
  CHECK(a.p_min == doctest::Approx(1e-6));
  CHECK(a.p_max == doctest::Approx(50.118723362727231));
  CHECK(a.delta_p == doctest::Approx(3.1622776601683795e-6));
  CHECK(c.estimation().error_variance() == doctest::Approx(c.noise_power() / 0.1));
}

TEST_CASE("JSON round trip") {
  ScenarioConfig c;
  c.antennas = 4;
  c.users = 2;
  c.pilot_length = 3;
  c.method = precoding::Method::zf;
  c.outage_targets = {1e-3, 1e-4};
  c.step_mode = allocator::StepMode::literal;
  const auto back = ScenarioConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.user_outage_targets() == std::vector<double>{1e-3, 1e-4});
}

TEST_CASE("scalar outage target is broadcast") {
  const auto c = ScenarioConfig::from_json({{"users", 3}, {"pilot_length", 3}, {"outage_targets", 1e-4}});
  CHECK(c.user_outage_targets() == std::vector<double>(3, 1e-4));
}

TEST_CASE("invalid configurations") {
  CHECK_THROWS_AS(ScenarioConfig::from_json({{"antenas", 4}}), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json({{"users", 3}, {"pilot_length", 2}}), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json({{"antennas", "eight"}}), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json({{"users", 5}, {"antennas", 4}, {"pilot_length", 5}, {"precoder", "zf"}}),
                  ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json({{"outage_targets", {1e-3, 1e-3}}}), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json({{"step_mode", "fast"}}), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config file") {
  const char* path = "test_config_tmp.json";
  {
    std::ofstream os(path);
    os << R"({"antennas": 16, "outage_targets": [1e-5], "error_samples": 100000})";
  }
  const auto c = ScenarioConfig::from_file(path);
  CHECK(c.antennas == 16);
  CHECK(c.error_samples == 100000);
  {
    std::ofstream os(path);
    os << "{ not json";
  }
  CHECK_THROWS_AS(ScenarioConfig::from_file(path), ConfigError);
  std::remove(path);
}
