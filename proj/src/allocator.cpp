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

#include "evtp/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evtp/errors.hpp"

namespace evtp::allocator {

void AllocConfig::validate(std::size_t users) const {
  if (!(p_min > 0.0) || !(p_min <= p_max)) throw ConfigError("alloc: need 0 < p_min <= p_max");
  if (!(delta_p > 0.0)) throw ConfigError("alloc: delta_p must be > 0");
  if (!(noise > 0.0)) throw ConfigError("alloc: noise power must be > 0");
  if (outage_targets.size() != users) throw ConfigError("alloc: one outage target per user required");
  if (sinr_targets.size() != users) throw ConfigError("alloc: one SINR target per user required");
  for (double z : outage_targets)
    if (!(z > 0.0 && z < 1.0)) throw ConfigError("alloc: outage targets must lie in (0, 1)");
  for (double g : sinr_targets)
    if (!(g > 0.0)) throw ConfigError("alloc: SINR targets must be > 0");
  tail.validate();
}

namespace {

struct Evaluation {
  bool fit_ok = false;
  double upper = 1.0;
  double lower = 1.0;
  std::optional<evt::TailOutage> tail;
  std::vector<double> psi_sorted;  // at the evaluated power
};

class Allocator {
 public:
  Allocator(const ChannelList& estimates, const std::vector<channel::ErrorSet>& errors,
            const AllocConfig& config)
      : config_(config), users_(estimates.size()) {
    if (users_ == 0) throw ConfigError("alloc: no users");
    if (errors.size() != users_) throw ConfigError("alloc: one error set per user required");
    config_.validate(users_);
    directions_ = precoding::directions(config_.method, estimates);
    gains_.resize(users_);
    for (std::size_t k = 0; k < users_; ++k) {
      const auto hyp = channel::perturbed_channel_set(estimates[k], errors[k]);
      auto& g = gains_[k];
      g.resize(hyp.size() * users_);
      for (std::size_t n = 0; n < hyp.size(); ++n)
        for (std::size_t i = 0; i < users_; ++i) g[n * users_ + i] = std::norm(hyp[n].dot(directions_[i]));
    }
    steps_.assign(users_, 0);
  }

  AllocationResult run() {
    AllocationResult result;
    result.users.resize(users_);
    for (;;) {
      ++result.sweeps;
      bool moved = false;
      for (std::size_t k = 0; k < users_; ++k) {
        const Evaluation e = evaluate(k, result);
        if (passes(k, e)) continue;
        moved = true;
        if (!escalate(k, e, result)) return finish(result, false);
      }
      if (!moved) return finish(result, true);
    }
  }

 private:
  double power(std::size_t k, long long extra = 0) const {
    return config_.p_min + static_cast<double>(steps_[k] + extra) * config_.delta_p;
  }

  double total_power(std::size_t k, long long extra) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < users_; ++i) sum += power(i, i == k ? extra : 0);
    return sum;
  }

  bool passes(std::size_t k, const Evaluation& e) const { return e.upper <= config_.outage_targets[k]; }

  // Full transform -> threshold -> fit -> bound chain for user k, with user k
  // raised by `extra` increments.
  Evaluation evaluate(std::size_t k, AllocationResult& result, long long extra = 0) const {
    const auto& g = gains_[k];
    const std::size_t n_samples = g.size() / users_;
    std::vector<double> sinr(n_samples);
    const double own = power(k, extra);
    for (std::size_t n = 0; n < n_samples; ++n) {
      double signal = 0.0;
      double interference = 0.0;
      for (std::size_t i = 0; i < users_; ++i) {
        const double gain = g[n * users_ + i] * (i == k ? own : power(i));
        if (i == k)
          signal = gain;
        else
          interference += gain;
      }
      sinr[n] = signal / (interference + config_.noise);
    }

    Evaluation e;
    try {
      e.tail = evt::tail_outage(sinr, config_.sinr_targets[k], config_.tail);
      e.fit_ok = true;
      e.upper = e.tail->upper;
      e.lower = e.tail->lower;
      // At or below the threshold the tail model says nothing beyond 1 - rho;
      // use the empirical exceedance so a target looser than 1 - rho is not
      // accepted on the saturated value alone.
      if (e.tail->phi <= e.tail->mu) {
        e.upper = std::max(e.upper, e.tail->exceed_fraction_at_target);
        e.lower = std::max(e.lower, e.tail->exceed_fraction_at_target);
      }
      e.psi_sorted.reserve(n_samples);
      for (double s : sinr) e.psi_sorted.push_back(-10.0 * std::log10(s));
      std::sort(e.psi_sorted.begin(), e.psi_sorted.end());
    } catch (const Error&) {
      e.fit_ok = false;
      e.upper = 1.0;
      e.lower = 1.0;
    }
    if (config_.record_trajectory)
      result.trajectory.push_back({k, own, e.upper, e.upper <= config_.outage_targets[k]});
    return e;
  }

  // Bound predicted from the fit at the base power when user k's own power
  // grows by `extra` increments; interference is unchanged.
  double predict(std::size_t k, const Evaluation& base, long long extra) const {
    if (!base.fit_ok) return 1.0;
    const auto& t = *base.tail;
    const double shift = 10.0 * std::log10(power(k, extra) / power(k));
    const double x = t.phi - t.mu + shift;
    const double rho = config_.tail.quantile;
    if (x > 0.0) return evt::outage_bound(t.fit.upper, t.phi, t.mu - shift, rho);
    const auto& ps = base.psi_sorted;
    const auto above = ps.end() - std::upper_bound(ps.begin(), ps.end(), t.phi + shift);
    return std::max(1.0 - rho, static_cast<double>(above) / static_cast<double>(ps.size()));
  }

  // Increments that first push the total over p_max.
  long long budget_steps(std::size_t k) const {
    long long j = std::max<long long>(
        1, static_cast<long long>(std::floor((config_.p_max - total_power(k, 0)) / config_.delta_p)));
    while (j > 1 && total_power(k, j - 1) > config_.p_max) --j;
    while (total_power(k, j) <= config_.p_max) ++j;
    return j;
  }

  // Raises user k until its bound passes. Returns false when the budget is
  // exhausted first.
  bool escalate(std::size_t k, const Evaluation& base, AllocationResult& result) {
    auto& out = result.users[k];
    if (config_.step_mode == StepMode::literal) {
      double failing = base.upper;
      for (;;) {
        ++steps_[k];
        ++result.iterations;
        if (total_power(k, 0) > config_.p_max) return false;
        const Evaluation e = evaluate(k, result);
        if (passes(k, e)) {
          out.last_failing_upper = failing;
          out.last_failing_power = power(k, -1);
          return true;
        }
        failing = e.upper;
      }
    }

    const long long limit = budget_steps(k);  // first over-budget increment count
    long long lo = 1;
    long long hi = limit;  // predict(hi) treated as failing
    while (lo < hi) {
      const long long mid = lo + (hi - lo) / 2;
      if (predict(k, base, mid) <= config_.outage_targets[k])
        hi = mid;
      else
        lo = mid + 1;
    }
    long long j = lo;
    if (j >= limit) {
      steps_[k] += limit;
      result.iterations += limit;
      return false;
    }
    Evaluation at = evaluate(k, result, j);
    while (!passes(k, at)) {
      if (++j >= limit) {
        steps_[k] += limit;
        result.iterations += limit;
        return false;
      }
      at = evaluate(k, result, j);
    }
    double failing = base.upper;
    while (j > 1) {
      const Evaluation below = evaluate(k, result, j - 1);
      if (!passes(k, below)) {
        failing = below.upper;
        break;
      }
      --j;
    }
    steps_[k] += j;
    result.iterations += j;
    out.last_failing_upper = failing;
    out.last_failing_power = power(k, -1);
    return true;
  }

  AllocationResult finish(AllocationResult& result, bool feasible) {
    result.feasible = feasible;
    result.precoders.directions = directions_;
    result.precoders.powers.resize(users_);
    for (std::size_t k = 0; k < users_; ++k) result.precoders.powers[k] = power(k);
    result.total_power = result.precoders.total_power();
    const bool record = config_.record_trajectory;
    config_.record_trajectory = false;
    for (std::size_t k = 0; k < users_; ++k) {
      const Evaluation e = evaluate(k, result);
      auto& out = result.users[k];
      out.outage_upper = e.upper;
      out.outage_lower = e.lower;
      if (e.fit_ok) out.fit = e.tail->fit;
    }
    config_.record_trajectory = record;
    if (feasible) {
      for (std::size_t k = 0; k < users_; ++k)
        if (!(result.users[k].outage_upper <= config_.outage_targets[k]) ||
            !(result.total_power <= config_.p_max))
          throw Error("alloc: internal error, feasible result violates user " + std::to_string(k));
    }
    return std::move(result);
  }

  AllocConfig config_;
  std::size_t users_;
  std::vector<CVector> directions_;
  std::vector<std::vector<double>> gains_;  // per user: N x K, |h~_n^H u_i|^2
  std::vector<long long> steps_;            // Delta p increments per user
};

}  // namespace

AllocationResult allocate(const ChannelList& estimates, const std::vector<channel::ErrorSet>& errors,
                          const AllocConfig& config) {
  return Allocator(estimates, errors, config).run();
}

}  // namespace evtp::allocator
