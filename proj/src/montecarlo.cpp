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

#include "evtp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evtp/errors.hpp"
#include "evtp/rng.hpp"

namespace evtp::montecarlo {

double OutageEstimate::fraction(std::size_t k) const {
  return trials ? static_cast<double>(outages.at(k)) / static_cast<double>(trials) : 0.0;
}

std::vector<double> OutageEstimate::fractions() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < outages.size(); ++k) out.push_back(fraction(k));
  return out;
}

OutageEstimate empirical_outage(const precoding::PrecoderSet& precoders, const ChannelList& estimates,
                                const channel::EstimationSpec& spec, std::span<const double> targets,
                                double noise, long long trials, std::uint64_t seed) {
  if (trials < 1) throw ConfigError("empirical_outage: need at least one trial");
  precoders.validate();
  const std::size_t users = precoders.size();
  if (estimates.size() != users || targets.size() != users)
    throw ConfigError("empirical_outage: one estimate and target per user required");
  const double var = spec.error_variance();
  const Eigen::Index m = estimates.front().size();

  std::vector<CVector> w(users);
  for (std::size_t i = 0; i < users; ++i) w[i] = precoders.precoder(i);
  // base(k, i) = h_est_k^H w_i
  CMatrix base(users, users);
  for (std::size_t k = 0; k < users; ++k)
    for (std::size_t i = 0; i < users; ++i) base(k, i) = estimates[k].dot(w[i]);

  OutageEstimate est;
  est.outages.assign(users, 0);
  est.trials = trials;
  const long long chunks = (trials + kChunkTrials - 1) / kChunkTrials;
  for (long long c = 0; c < chunks; ++c) {
    Rng rng = substream(seed, "montecarlo", static_cast<std::uint64_t>(c));
    const long long count = std::min(kChunkTrials, trials - c * kChunkTrials);
    for (long long t = 0; t < count; ++t) {
      for (std::size_t k = 0; k < users; ++k) {
        const CVector e = complex_normal_vector(rng, m, var);
        double signal = 0.0;
        double interference = 0.0;
        for (std::size_t i = 0; i < users; ++i) {
          const double g = std::norm(base(k, i) + e.dot(w[i]));
          if (i == k)
            signal = g;
          else
            interference += g;
        }
        if (signal / (interference + noise) < targets[k]) ++est.outages[k];
      }
    }
  }
  return est;
}

Histogram::Histogram(double lo, double hi, int n) : lo_db(lo), hi_db(hi), bins(n), counts(n, 0) {
  if (!(hi > lo) || n < 1) throw ConfigError("histogram: need hi > lo and at least one bin");
}

void Histogram::add(double value_db) {
  if (counts.size() != static_cast<std::size_t>(bins)) counts.assign(bins, 0);
  if (value_db < lo_db) {
    ++underflow;
    return;
  }
  const auto idx = static_cast<long long>(std::floor((value_db - lo_db) / (hi_db - lo_db) * bins));
  if (idx >= bins) {
    ++overflow;
    return;
  }
  ++counts[static_cast<std::size_t>(idx)];
}

std::string Histogram::to_csv() const {
  std::ostringstream os;
  os.precision(10);
  os << "bin_lo_db,bin_hi_db,count\n";
  for (int i = 0; i < bins; ++i) os << edge(i) << ',' << edge(i + 1) << ',' << counts[i] << '\n';
  return os.str();
}

SweepResult estimation_sweep(const CVector& true_channel, const channel::EstimationSpec& spec,
                             double power, double target, double noise, long long trials,
                             std::uint64_t seed, SweepOptions options) {
  if (trials < 1) throw ConfigError("estimation_sweep: need at least one trial");
  if (!(noise > 0.0)) throw ConfigError("estimation_sweep: noise must be > 0");
  if (!(power >= 0.0)) throw ConfigError("estimation_sweep: power must be >= 0");
  const double var = spec.error_variance();
  const Eigen::Index m = true_channel.size();
  const ChannelList truth{true_channel};
  const CMatrix pilots = channel::pilot_matrix(1, spec.pilot_length);

  SweepResult res;
  res.trials = trials;
  res.histogram = std::move(options.histogram);
  if (options.keep_samples) res.samples.reserve(static_cast<std::size_t>(trials));
  const long long chunks = (trials + kChunkTrials - 1) / kChunkTrials;
  for (long long c = 0; c < chunks; ++c) {
    Rng rng = substream(seed, "estimation-sweep", static_cast<std::uint64_t>(c));
    const long long count = std::min(kChunkTrials, trials - c * kChunkTrials);
    for (long long t = 0; t < count; ++t) {
      CVector est = options.path == EstimationPath::additive
                        ? CVector(true_channel + complex_normal_vector(rng, m, var))
                        : channel::ls_estimate(truth, pilots, spec, rng).front();
      const double norm = est.norm();
      const double gamma = norm > 0.0 ? power * std::norm(true_channel.dot(est)) / (norm * norm) / noise : 0.0;
      if (gamma < target) ++res.below;
      if (options.keep_samples) res.samples.push_back(gamma);
      if (res.histogram) res.histogram->add(10.0 * std::log10(gamma));
    }
  }
  return res;
}

}  // namespace evtp::montecarlo
