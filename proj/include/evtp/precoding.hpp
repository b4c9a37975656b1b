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

#include <span>
#include <string_view>
#include <vector>

#include "evtp/linalg.hpp"

namespace evtp::precoding {

enum class Method { mrt, zf };

Method parse_method(std::string_view name);
std::string_view to_string(Method m);

// w_k = sqrt(p_k) u_k with unit-norm u_k.
struct PrecoderSet {
  std::vector<CVector> directions;
  std::vector<double> powers;

  std::size_t size() const { return directions.size(); }
  CVector precoder(std::size_t k) const;
  double total_power() const;
  void validate() const;
};

// Condition number above which the ZF estimate matrix is treated as rank deficient.
inline constexpr double kZfConditionLimit = 1e10;

// u_k = h_k / ||h_k||. Throws DegenerateError on a zero estimate.
std::vector<CVector> mrt_directions(const ChannelList& estimates);

// Columns of H (H^H H)^-1, normalised. Throws RankError when K > M or the
// estimate matrix is ill conditioned.
std::vector<CVector> zf_directions(const ChannelList& estimates);

std::vector<CVector> directions(Method method, const ChannelList& estimates);

// |h^H w_k|^2 / (sum_{i != k} |h^H w_i|^2 + noise).
double sinr(const PrecoderSet& precoders, const CVector& channel, std::size_t ue, double noise);

// sinr() at every hypothesised channel, order preserved.
std::vector<double> sinr_samples(const PrecoderSet& precoders, std::span<const CVector> channels,
                                 std::size_t ue, double noise);

struct SinrTargetSpec {
  double payload_bits = 256.0;
  int frame_length = 42;
  int pilot_length = 1;

  int downlink_symbols() const { return frame_length - pilot_length; }
  void validate() const;
};

// 2^(B / (tau_f - tau_e)) - 1.
double sinr_target(const SinrTargetSpec& spec);

}  // namespace evtp::precoding
