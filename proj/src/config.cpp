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

#include "evtp/config.hpp"

#include <fstream>
#include <set>

#include "evtp/errors.hpp"
#include "evtp/units.hpp"

namespace evtp {

void ScenarioConfig::validate() const {
  if (antennas < 1) throw ConfigError("config: antennas must be >= 1");
  if (users < 1) throw ConfigError("config: users must be >= 1");
  if (channel_model != "rayleigh" && channel_model != "rician")
    throw ConfigError("config: channel_model must be 'rayleigh' or 'rician'");
  if (clusters < 1) throw ConfigError("config: clusters must be >= 1");
  if (!(angular_std_deg > 0.0)) throw ConfigError("config: angular_std_deg must be > 0");
  if (pilot_length < users) throw ConfigError("config: pilot_length must be >= users");
  if (pilot_length >= frame_length) throw ConfigError("config: pilot_length must be < frame_length");
  if (method == precoding::Method::zf && users > antennas)
    throw ConfigError("config: zero-forcing needs users <= antennas");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("config: bandwidth_hz must be > 0");
  if (error_samples < 1) throw ConfigError("config: error_samples must be >= 1");
  if (outage_targets.empty() ||
      (outage_targets.size() != 1 && outage_targets.size() != static_cast<std::size_t>(users)))
    throw ConfigError("config: outage_targets needs 1 or `users` entries");
  if (p_min_dbm > p_max_dbm) throw ConfigError("config: p_min_dbm must be <= p_max_dbm");
  if (trials < 0) throw ConfigError("config: trials must be >= 0");
  if (scenario_seeds < 0) throw ConfigError("config: scenario_seeds must be >= 0");
  tail().validate();
  alloc_config().validate(static_cast<std::size_t>(users));
}

double ScenarioConfig::noise_power() const { return units::thermal_noise_watts(bandwidth_hz, noise_figure_db); }

channel::EstimationSpec ScenarioConfig::estimation() const {
  return {.uplink_power = units::dbm_to_watts(uplink_power_dbm),
          .pilot_length = pilot_length,
          .noise_power = noise_power()};
}

precoding::SinrTargetSpec ScenarioConfig::sinr_target_spec() const {
  return {.payload_bits = payload_bits, .frame_length = frame_length, .pilot_length = pilot_length};
}

double ScenarioConfig::sinr_target() const { return precoding::sinr_target(sinr_target_spec()); }

std::vector<double> ScenarioConfig::user_outage_targets() const {
  if (outage_targets.size() == 1) return std::vector<double>(static_cast<std::size_t>(users), outage_targets[0]);
  return outage_targets;
}

evt::TailConfig ScenarioConfig::tail() const {
  return {.quantile = quantile, .confidence = confidence, .min_excesses = min_excesses};
}

allocator::AllocConfig ScenarioConfig::alloc_config() const {
  allocator::AllocConfig c;
  c.p_min = units::dbm_to_watts(p_min_dbm);
  c.p_max = units::dbm_to_watts(p_max_dbm);
  c.delta_p = units::dbm_to_watts(delta_p_dbm);
  c.outage_targets = user_outage_targets();
  c.tail = tail();
  c.method = method;
  c.noise = noise_power();
  c.sinr_targets.assign(static_cast<std::size_t>(users), sinr_target());
  c.step_mode = step_mode;
  return c;
}

namespace {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::set<std::string> known{
      "antennas",      "users",         "channel_model",  "rician_k_db",  "gain_db",
      "angular_std_deg", "clusters",    "cluster_halfwidth_deg", "frame_length", "pilot_length",
      "payload_bits",  "uplink_power_dbm", "bandwidth_hz", "noise_figure_db", "error_samples",
      "quantile",      "confidence",    "min_excesses",   "outage_targets", "p_min_dbm",
      "p_max_dbm",     "delta_p_dbm",   "precoder",       "trials",        "seed",
      "scenario_seeds", "step_mode"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError("config: unknown key '" + key + "'");

  ScenarioConfig c;
  read(j, "antennas", c.antennas);
  read(j, "users", c.users);
  read(j, "channel_model", c.channel_model);
  read(j, "rician_k_db", c.rician_k_db);
  read(j, "gain_db", c.gain_db);
  read(j, "angular_std_deg", c.angular_std_deg);
  read(j, "clusters", c.clusters);
  read(j, "cluster_halfwidth_deg", c.cluster_halfwidth_deg);
  read(j, "frame_length", c.frame_length);
  read(j, "pilot_length", c.pilot_length);
  read(j, "payload_bits", c.payload_bits);
  read(j, "uplink_power_dbm", c.uplink_power_dbm);
  read(j, "bandwidth_hz", c.bandwidth_hz);
  read(j, "noise_figure_db", c.noise_figure_db);
  read(j, "error_samples", c.error_samples);
  read(j, "quantile", c.quantile);
  read(j, "confidence", c.confidence);
  read(j, "min_excesses", c.min_excesses);
  if (j.contains("outage_targets")) {
    if (j["outage_targets"].is_number())
      c.outage_targets = {j["outage_targets"].get<double>()};
    else
      read(j, "outage_targets", c.outage_targets);
  }
  read(j, "p_min_dbm", c.p_min_dbm);
  read(j, "p_max_dbm", c.p_max_dbm);
  read(j, "delta_p_dbm", c.delta_p_dbm);
  if (j.contains("precoder")) {
    std::string m;
    read(j, "precoder", m);
    c.method = precoding::parse_method(m);
  }
  read(j, "trials", c.trials);
  read(j, "seed", c.seed);
  read(j, "scenario_seeds", c.scenario_seeds);
  if (j.contains("step_mode")) {
    std::string m;
    read(j, "step_mode", m);
    if (m == "jump")
      c.step_mode = allocator::StepMode::jump;
    else if (m == "literal")
      c.step_mode = allocator::StepMode::literal;
    else
      throw ConfigError("config: step_mode must be 'jump' or 'literal'");
  }
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

nlohmann::json ScenarioConfig::to_json() const {
  return {{"antennas", antennas},
          {"users", users},
          {"channel_model", channel_model},
          {"rician_k_db", rician_k_db},
          {"gain_db", gain_db},
          {"angular_std_deg", angular_std_deg},
          {"clusters", clusters},
          {"cluster_halfwidth_deg", cluster_halfwidth_deg},
          {"frame_length", frame_length},
          {"pilot_length", pilot_length},
          {"payload_bits", payload_bits},
          {"uplink_power_dbm", uplink_power_dbm},
          {"bandwidth_hz", bandwidth_hz},
          {"noise_figure_db", noise_figure_db},
          {"error_samples", error_samples},
          {"quantile", quantile},
          {"confidence", confidence},
          {"min_excesses", min_excesses},
          {"outage_targets", outage_targets},
          {"p_min_dbm", p_min_dbm},
          {"p_max_dbm", p_max_dbm},
          {"delta_p_dbm", delta_p_dbm},
          {"precoder", std::string(precoding::to_string(method))},
          {"trials", trials},
          {"seed", seed},
          {"scenario_seeds", scenario_seeds},
          {"step_mode", step_mode == allocator::StepMode::jump ? "jump" : "literal"}};
}

}  // namespace evtp
