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

#include <limits>
#include <optional>
#include <vector>

#include "evtp/channel.hpp"
#include "evtp/evt.hpp"
#include "evtp/linalg.hpp"
#include "evtp/precoding.hpp"

namespace evtp::allocator {

// How the per-user power escalation is carried out.
//  literal: one Delta p increment per refit, exactly as the loop is written.
//  jump:    a user's own power only shifts its psi samples, so the excess set
//           and fit are unchanged while it escalates. The increment count that
//           first clears the target is solved for directly and then confirmed
//           with a full refit at that power and at one increment below.
enum class StepMode { literal, jump };

struct AllocConfig {
  double p_min = 1e-6;                 // watts (-30 dBm)
  double p_max = 50.118723362727231;   // watts (47 dBm)
  double delta_p = 3.1622776601683795e-6;  // watts (-25 dBm)
  std::vector<double> outage_targets;  // zeta_k
  evt::TailConfig tail;
  precoding::Method method = precoding::Method::mrt;
  double noise = 1.0;                  // sigma_v^2, watts
  std::vector<double> sinr_targets;    // gamma_tar per user
  StepMode step_mode = StepMode::jump;
  bool record_trajectory = false;

  void validate(std::size_t users) const;
};

// One tested power for one user.
struct TrajectoryPoint {
  std::size_t ue = 0;
  double power = 0.0;
  double outage_upper = 1.0;
  bool passed = false;
};

struct UserOutcome {
  double outage_upper = 1.0;  // O_UB at the returned power vector
  double outage_lower = 1.0;  // O_LB at the returned power vector
  std::optional<evt::GpdFit> fit;
  // Bound seen one increment below the returned power, when this user was
  // last escalated. NaN if the user never moved from p_min.
  double last_failing_upper = std::numeric_limits<double>::quiet_NaN();
  double last_failing_power = std::numeric_limits<double>::quiet_NaN();
};

struct AllocationResult {
  bool feasible = false;
  precoding::PrecoderSet precoders;
  std::vector<UserOutcome> users;
  long long iterations = 0;  // number of Delta p increments
  int sweeps = 0;
  double total_power = 0.0;
  std::vector<TrajectoryPoint> trajectory;
};

AllocationResult allocate(const ChannelList& estimates, const std::vector<channel::ErrorSet>& errors,
                          const AllocConfig& config);

}  // namespace evtp::allocator
