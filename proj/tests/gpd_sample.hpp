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
#include <random>
#include <vector>

#include "evtp/rng.hpp"

namespace evtp::testing {

// Inverse-CDF draws from GPD(shape, scale).
inline std::vector<double> gpd_draws(double shape, double scale, int n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (auto& z : out) {
    const double v = 1.0 - u(rng);
    z = std::abs(shape) < 1e-12 ? -scale * std::log(v) : scale * (std::pow(v, -shape) - 1.0) / shape;
  }
  return out;
}

}  // namespace evtp::testing
