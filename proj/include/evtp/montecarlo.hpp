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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evtp/channel.hpp"
#include "evtp/linalg.hpp"
#include "evtp/precoding.hpp"

// Monte Carlo oracles. Trials are grouped in fixed-size chunks, each drawn from
// its own substream of the caller's seed, so results do not depend on the
// order in which chunks are processed and extending the trial count leaves the
// earlier chunks untouched.
namespace evtp::montecarlo {

inline constexpr long long kChunkTrials = 1 << 16;

struct OutageEstimate {
  std::vector<long long> outages;  // per user
  long long trials = 0;

  double fraction(std::size_t k) const;
  std::vector<double> fractions() const;
};

// Fresh errors h_k = h_est_k + e_k with e_k ~ CN(0, sigma_e^2 I) per trial;
// counts SINR_k < target_k for every user.
OutageEstimate empirical_outage(const precoding::PrecoderSet& precoders, const ChannelList& estimates,
                                const channel::EstimationSpec& spec, std::span<const double> targets,
                                double noise, long long trials, std::uint64_t seed);

struct Histogram {
  double lo_db = -10.0;
  double hi_db = 30.0;
  int bins = 200;
  std::vector<long long> counts;
  long long underflow = 0;
  long long overflow = 0;

  Histogram() = default;
  Histogram(double lo, double hi, int n);
  void add(double value_db);
  double edge(int i) const { return lo_db + (hi_db - lo_db) * i / bins; }
  std::string to_csv() const;
};

enum class EstimationPath { additive, ls_pilots };

struct SweepOptions {
  EstimationPath path = EstimationPath::additive;
  bool keep_samples = false;
  std::optional<Histogram> histogram;
};

struct SweepResult {
  long long trials = 0;
  long long below = 0;
  double fraction() const { return trials ? static_cast<double>(below) / static_cast<double>(trials) : 0.0; }
  std::vector<double> samples;  // linear SINR, only with keep_samples
  std::optional<Histogram> histogram;
};

// Repeated estimation of a fixed true channel: per trial, estimate, build the
// MRT precoder with `power` from the estimate and evaluate the SINR at the
// true channel.
SweepResult estimation_sweep(const CVector& true_channel, const channel::EstimationSpec& spec,
                             double power, double target, double noise, long long trials,
                             std::uint64_t seed, SweepOptions options = {});

}  // namespace evtp::montecarlo
