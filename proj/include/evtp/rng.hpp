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
#include <random>
#include <string_view>

#include "evtp/linalg.hpp"

namespace evtp {

// Engine used by every stochastic operation. Operations take it by reference
// and never keep it, so independent substreams can be handed to independent
// jobs.
using Rng = std::mt19937_64;

namespace seeding {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// FNV-1a, used to turn stream names into 64-bit tags.
constexpr std::uint64_t name_tag(std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace seeding

// Deterministic seed for substream (name, index) of a master seed. The map is
// counter based: the seed of substream i does not depend on how many other
// substreams were drawn before it.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::string_view name,
                                       std::uint64_t index = 0) {
  using seeding::splitmix64;
  return splitmix64(splitmix64(master ^ seeding::name_tag(name)) + splitmix64(index + 1));
}

inline Rng substream(std::uint64_t master, std::string_view name, std::uint64_t index = 0) {
  return Rng(substream_seed(master, name, index));
}

// Circularly-symmetric complex Gaussian with E|x|^2 = variance.
inline cdouble complex_normal(Rng& rng, double variance) {
  if (variance == 0.0) return {0.0, 0.0};
  std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline CVector complex_normal_vector(Rng& rng, Eigen::Index size, double variance) {
  CVector v = CVector::Zero(size);
  if (variance == 0.0) return v;
  std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
  for (Eigen::Index i = 0; i < size; ++i) {
    const double re = n(rng);
    const double im = n(rng);
    v[i] = {re, im};
  }
  return v;
}

}  // namespace evtp
