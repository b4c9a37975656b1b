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

#include "evtp/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evtp/errors.hpp"

namespace evtp::benchmark {

void WorstCaseSpec::validate() const {
  if (!(radius >= 0.0)) throw ConfigError("worst case: radius must be >= 0");
  if (!(sinr_target >= 0.0)) throw ConfigError("worst case: SINR target must be >= 0");
  if (!(noise > 0.0)) throw ConfigError("worst case: noise must be > 0");
}

double radius_from_errors(const channel::ErrorSet& errors, double outage_target) {
  if (!(outage_target > 0.0 && outage_target < 1.0))
    throw ConfigError("radius: outage target must lie in (0, 1)");
  const auto n = errors.size();
  if (static_cast<double>(n) * outage_target < 1.0 - 1e-9)
    throw InfeasibleError("radius: " + std::to_string(n) + " error samples, need at least 1/zeta = " +
                          std::to_string(1.0 / outage_target));
  std::vector<double> norms;
  norms.reserve(n);
  for (const auto& e : errors.samples) norms.push_back(e.norm());
  std::sort(norms.begin(), norms.end());
  auto rank = static_cast<std::size_t>(std::ceil((1.0 - outage_target) * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return norms[rank - 1];
}

double worst_case_power(const CVector& estimate, double radius, double sinr_target, double noise) {
  const double norm = estimate.norm();
  if (!(radius < norm)) throw InfeasibleError("worst case: radius covers the null channel");
  const double margin = norm - radius;
  return sinr_target * noise / (margin * margin);
}

double worst_case_sinr(const CVector& precoder, const CVector& estimate, double radius, double noise) {
  const double amp = std::max(std::abs(estimate.dot(precoder)) - radius * precoder.norm(), 0.0);
  return amp * amp / noise;
}

WorstCaseSolution solve(const CVector& estimate, const WorstCaseSpec& spec) {
  spec.validate();
  WorstCaseSolution s;
  s.radius = spec.radius;
  s.power = worst_case_power(estimate, spec.radius, spec.sinr_target, spec.noise);
  s.direction = estimate / estimate.norm();
  return s;
}

}  // namespace evtp::benchmark
