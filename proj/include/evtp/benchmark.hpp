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

#include "evtp/channel.hpp"
#include "evtp/linalg.hpp"

// Worst-case robust single-user benchmark: the SINR target must hold for every
// channel in the ball ||h - h_est|| <= radius.
namespace evtp::benchmark {

struct WorstCaseSpec {
  double radius = 0.0;        // epsilon
  double outage_target = 0.0; // zeta
  double sinr_target = 1.0;   // gamma_tar
  double noise = 1.0;         // sigma_v^2

  void validate() const;
};

// Empirical (1 - zeta)-quantile of the error norms. Needs N >= 1/zeta.
double radius_from_errors(const channel::ErrorSet& errors, double outage_target);

// Minimum power along h/||h|| meeting the target over the whole ball:
// gamma sigma^2 / (||h|| - eps)^2. Throws InfeasibleError if eps >= ||h||.
double worst_case_power(const CVector& estimate, double radius, double sinr_target, double noise);

// Minimum SINR of precoder w over the ball: max(|h^H w| - eps ||w||, 0)^2 / sigma^2.
double worst_case_sinr(const CVector& precoder, const CVector& estimate, double radius, double noise);

struct WorstCaseSolution {
  CVector direction;
  double power = 0.0;
  double radius = 0.0;
};

WorstCaseSolution solve(const CVector& estimate, const WorstCaseSpec& spec);

}  // namespace evtp::benchmark
