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

#include <numbers>
#include <variant>
#include <vector>

#include "evtp/linalg.hpp"
#include "evtp/rng.hpp"

namespace evtp::channel {

// Local-scattering spatial correlation for a half-wavelength ULA.
struct CorrelationSpec {
  int antennas = 1;
  double gain = 1.0;            // beta, linear
  double azimuth = 0.0;         // nominal azimuth, radians
  double angular_std = std::numbers::pi / 36.0;  // per-cluster std, radians
  int clusters = 1;
  double cluster_halfwidth = 2.0 * std::numbers::pi / 9.0;

  void validate() const;
};

// Cluster nominal angles, uniform in [azimuth - halfwidth, azimuth + halfwidth].
std::vector<double> draw_cluster_angles(const CorrelationSpec& spec, Rng& rng);

// Correlation matrix for explicit cluster angles. Entry (t, m):
//   beta/L sum_l exp(i pi (t-m) sin phi_l) exp(-1/2 sigma^2 (pi (t-m) cos phi_l)^2)
CMatrix correlation_matrix(const CorrelationSpec& spec, const std::vector<double>& cluster_angles);

// Draws the cluster angles from rng, then builds the matrix.
CMatrix correlation_matrix(const CorrelationSpec& spec, Rng& rng);

struct CorrelatedRayleigh {
  CMatrix correlation;
};

struct Rician {
  double k_factor = 0.0;  // linear, LOS-to-scatter power ratio
  CMatrix correlation;    // of the scattered part
  double gain = 1.0;      // beta applied to the LOS component
  std::vector<double> los_phases;  // theta_1 .. theta_{M-1}, relative to antenna 0
};

using FadingModel = std::variant<CorrelatedRayleigh, Rician>;

// ULA steering phases theta_m = pi m sin(azimuth), m = 1 .. M-1.
std::vector<double> ula_phases(int antennas, double azimuth);

void validate(const FadingModel& model);
Eigen::Index dimension(const FadingModel& model);

// Hermitian square root of a PSD matrix (negative eigenvalues clipped).
CMatrix psd_sqrt(const CMatrix& r);

// One channel vector from the model.
CVector sample_channel(const FadingModel& model, Rng& rng);

// Sampler that factors the correlation once; use for repeated draws.
class ChannelSampler {
 public:
  explicit ChannelSampler(FadingModel model);
  CVector operator()(Rng& rng) const;
  const FadingModel& model() const { return model_; }

 private:
  FadingModel model_;
  CMatrix sqrt_corr_;
  CVector los_;       // scaled LOS part, zero for Rayleigh
  double nlos_scale_ = 1.0;
};

// Uplink pilot-based estimation error parameters.
struct EstimationSpec {
  double uplink_power = 0.1;  // watts
  int pilot_length = 1;       // symbols
  double noise_power = 0.0;   // watts

  void validate() const;
  // Per-entry variance of the LS error, noise / (p_ul tau_e).
  double error_variance() const;
};

// tau_e x K matrix of orthogonal pilots with squared column norm tau_e
// (scaled DFT columns). Throws ConfigError if tau_e < K.
CMatrix pilot_matrix(int users, int pilot_length);

// Simulates the received pilot block and returns the LS estimate for every
// user. Pilots must have orthogonal columns.
ChannelList ls_estimate(const ChannelList& true_channels, const CMatrix& pilots,
                        const EstimationSpec& spec, Rng& rng);

struct ErrorSet {
  std::vector<CVector> samples;
  EstimationSpec spec;

  std::size_t size() const { return samples.size(); }
};

ErrorSet draw_error_set(const EstimationSpec& spec, int count, int antennas, Rng& rng);

// { estimate + e : e in errors }, in order.
ChannelList perturbed_channel_set(const CVector& estimate, const ErrorSet& errors);

}  // namespace evtp::channel
