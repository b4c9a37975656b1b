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

#include <cmath>
#include <numbers>

namespace evtp::units {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Thermal noise power in watts for a receiver with the given bandwidth and
// noise figure: -173.8 + 10 log10(BW) + NF [dBm].
inline double thermal_noise_watts(double bandwidth_hz, double noise_figure_db) {
  return dbm_to_watts(-173.8 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

}  // namespace evtp::units
