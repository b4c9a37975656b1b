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
#include <string>
#include <vector>

#include "json.hpp"

#include "evtp/allocator.hpp"
#include "evtp/channel.hpp"
#include "evtp/evt.hpp"
#include "evtp/precoding.hpp"

namespace evtp {

// Flat scenario description. Powers are in dBm, gains in dB and angles in
// degrees; conversion to linear units happens only in the accessors below.
//
// JSON keys (all optional, defaults shown):
//   antennas 8, users 1, channel_model "rayleigh" | "rician", rician_k_db 0,
//   gain_db -115, angular_std_deg 5, clusters 10, cluster_halfwidth_deg 40,
//   frame_length 42, pilot_length 1, payload_bits 256, uplink_power_dbm 20,
//   bandwidth_hz 60000, noise_figure_db 7, error_samples 10000, quantile 0.95,
//   confidence 0.8, min_excesses 30, outage_targets [1e-3] (one value is
//   broadcast to every user), p_min_dbm -30, p_max_dbm 47, delta_p_dbm -25,
//   precoder "mrt" | "zf", trials 1000000, seed 1, scenario_seeds 50,
//   step_mode "jump" | "literal"
struct ScenarioConfig {
  int antennas = 8;
  int users = 1;
  std::string channel_model = "rayleigh";
  double rician_k_db = 0.0;
  double gain_db = -115.0;
  double angular_std_deg = 5.0;
  int clusters = 10;
  double cluster_halfwidth_deg = 40.0;
  int frame_length = 42;
  int pilot_length = 1;
  double payload_bits = 256.0;
  double uplink_power_dbm = 20.0;
  double bandwidth_hz = 60e3;
  double noise_figure_db = 7.0;
  int error_samples = 10000;
  double quantile = 0.95;
  double confidence = 0.8;
  int min_excesses = evt::kDefaultMinExcesses;
  std::vector<double> outage_targets{1e-3};
  double p_min_dbm = -30.0;
  double p_max_dbm = 47.0;
  double delta_p_dbm = -25.0;
  precoding::Method method = precoding::Method::mrt;
  long long trials = 1000000;
  std::uint64_t seed = 1;
  int scenario_seeds = 50;
  allocator::StepMode step_mode = allocator::StepMode::jump;

  void validate() const;

  double noise_power() const;  // sigma_n^2 = sigma_v^2, watts
  channel::EstimationSpec estimation() const;
  precoding::SinrTargetSpec sinr_target_spec() const;
  double sinr_target() const;
  std::vector<double> user_outage_targets() const;  // broadcast to K entries
  evt::TailConfig tail() const;
  allocator::AllocConfig alloc_config() const;

  static ScenarioConfig from_json(const nlohmann::json& j);
  static ScenarioConfig from_file(const std::string& path);
  nlohmann::json to_json() const;
};

}  // namespace evtp
