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

#include "evtp/channel.hpp"

#include <cmath>
#include <string>

#include "evtp/errors.hpp"

namespace evtp::channel {

void CorrelationSpec::validate() const {
  if (antennas < 1) throw ConfigError("correlation: antennas must be >= 1");
  if (clusters < 1) throw ConfigError("correlation: clusters must be >= 1");
  if (!(angular_std > 0.0)) throw ConfigError("correlation: angular std must be > 0");
  if (!(gain > 0.0)) throw ConfigError("correlation: gain must be > 0");
  if (!(cluster_halfwidth >= 0.0)) throw ConfigError("correlation: negative cluster halfwidth");
}

std::vector<double> draw_cluster_angles(const CorrelationSpec& spec, Rng& rng) {
  spec.validate();
  std::uniform_real_distribution<double> u(spec.azimuth - spec.cluster_halfwidth,
                                           spec.azimuth + spec.cluster_halfwidth);
  std::vector<double> angles(static_cast<std::size_t>(spec.clusters));
  for (auto& a : angles) a = u(rng);
  return angles;
}

CMatrix correlation_matrix(const CorrelationSpec& spec, const std::vector<double>& cluster_angles) {
  spec.validate();
  if (cluster_angles.empty()) throw ConfigError("correlation: no cluster angles");
  const Eigen::Index m = spec.antennas;
  const double pi = std::numbers::pi;
  const double clusters = static_cast<double>(cluster_angles.size());
  CMatrix r(m, m);
  for (Eigen::Index t = 0; t < m; ++t) {
    r(t, t) = spec.gain;
    for (Eigen::Index s = t + 1; s < m; ++s) {
      const double d = static_cast<double>(t - s);
      cdouble acc{0.0, 0.0};
      for (double phi : cluster_angles) {
        const double spread = pi * d * std::cos(phi);
        acc += std::polar(std::exp(-0.5 * spec.angular_std * spec.angular_std * spread * spread),
                          pi * d * std::sin(phi));
      }
      r(t, s) = acc / clusters * spec.gain;
      r(s, t) = std::conj(r(t, s));
    }
  }
  return r;
}

CMatrix correlation_matrix(const CorrelationSpec& spec, Rng& rng) {
  return correlation_matrix(spec, draw_cluster_angles(spec, rng));
}

std::vector<double> ula_phases(int antennas, double azimuth) {
  std::vector<double> phases;
  for (int m = 1; m < antennas; ++m) phases.push_back(std::numbers::pi * m * std::sin(azimuth));
  return phases;
}

namespace {

void check_square(const CMatrix& r) {
  if (r.rows() < 1 || r.rows() != r.cols()) throw ConfigError("fading: correlation must be square");
}

}  // namespace

void validate(const FadingModel& model) {
  if (const auto* ray = std::get_if<CorrelatedRayleigh>(&model)) {
    check_square(ray->correlation);
    return;
  }
  const auto& ric = std::get<Rician>(model);
  check_square(ric.correlation);
  if (!(ric.k_factor >= 0.0)) throw ConfigError("fading: Rician factor must be >= 0");
  if (!(ric.gain > 0.0)) throw ConfigError("fading: LOS gain must be > 0");
  if (static_cast<Eigen::Index>(ric.los_phases.size()) + 1 != ric.correlation.rows())
    throw ConfigError("fading: need M-1 LOS phases");
}

Eigen::Index dimension(const FadingModel& model) {
  return std::visit([](const auto& m) { return m.correlation.rows(); }, model);
}

CMatrix psd_sqrt(const CMatrix& r) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(r);
  if (eig.info() != Eigen::Success) throw DomainError("psd_sqrt: eigendecomposition failed");
  const RVector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().adjoint();
}

ChannelSampler::ChannelSampler(FadingModel model) : model_(std::move(model)) {
  validate(model_);
  if (const auto* ray = std::get_if<CorrelatedRayleigh>(&model_)) {
    sqrt_corr_ = psd_sqrt(ray->correlation);
    los_ = CVector::Zero(ray->correlation.rows());
    return;
  }
  const auto& ric = std::get<Rician>(model_);
  const Eigen::Index m = ric.correlation.rows();
  sqrt_corr_ = psd_sqrt(ric.correlation);
  los_.resize(m);
  los_[0] = 1.0;
  for (Eigen::Index i = 1; i < m; ++i) los_[i] = std::polar(1.0, ric.los_phases[i - 1]);
  los_ *= std::sqrt(ric.k_factor / (ric.k_factor + 1.0)) * std::sqrt(ric.gain);
  nlos_scale_ = std::sqrt(1.0 / (ric.k_factor + 1.0));
}

CVector ChannelSampler::operator()(Rng& rng) const {
  const CVector z = complex_normal_vector(rng, sqrt_corr_.rows(), 1.0);
  return los_ + nlos_scale_ * (sqrt_corr_ * z);
}

CVector sample_channel(const FadingModel& model, Rng& rng) { return ChannelSampler(model)(rng); }

void EstimationSpec::validate() const {
  if (!(uplink_power > 0.0)) throw ConfigError("estimation: uplink power must be > 0");
  if (pilot_length < 1) throw ConfigError("estimation: pilot length must be >= 1");
  if (!(noise_power >= 0.0)) throw ConfigError("estimation: noise power must be >= 0");
}

double EstimationSpec::error_variance() const {
  validate();
  return noise_power / (uplink_power * pilot_length);
}

CMatrix pilot_matrix(int users, int pilot_length) {
  if (users < 1) throw ConfigError("pilots: need at least one user");
  if (pilot_length < users)
    throw ConfigError("pilots: pilot length " + std::to_string(pilot_length) + " < users " +
                      std::to_string(users) + " (pilot contamination not modeled)");
  CMatrix s(pilot_length, users);
  for (int t = 0; t < pilot_length; ++t)
    for (int k = 0; k < users; ++k)
      s(t, k) = std::polar(1.0, -2.0 * std::numbers::pi * t * k / pilot_length);
  return s;
}

ChannelList ls_estimate(const ChannelList& true_channels, const CMatrix& pilots,
                        const EstimationSpec& spec, Rng& rng) {
  spec.validate();
  const auto users = static_cast<Eigen::Index>(true_channels.size());
  if (users == 0) return {};
  if (pilots.cols() != users) throw ConfigError("ls_estimate: one pilot column per user required");
  if (pilots.rows() != spec.pilot_length) throw ConfigError("ls_estimate: pilot length mismatch");
  const CMatrix gram = pilots.adjoint() * pilots;
  const double tau = spec.pilot_length;
  for (Eigen::Index i = 0; i < users; ++i)
    for (Eigen::Index j = 0; j < users; ++j)
      if (i != j && std::abs(gram(i, j)) > 1e-9 * tau)
        throw ConfigError("ls_estimate: pilots are not orthogonal");

  const Eigen::Index m = true_channels.front().size();
  const double amp = std::sqrt(spec.uplink_power);
  CMatrix y = CMatrix::Zero(m, pilots.rows());
  for (Eigen::Index k = 0; k < users; ++k) {
    if (true_channels[k].size() != m) throw ConfigError("ls_estimate: channel size mismatch");
    y += amp * true_channels[k] * pilots.col(k).adjoint();
  }
  if (spec.noise_power > 0.0) {
    for (Eigen::Index c = 0; c < y.cols(); ++c)
      y.col(c) += complex_normal_vector(rng, m, spec.noise_power);
  }
  ChannelList out;
  out.reserve(true_channels.size());
  for (Eigen::Index k = 0; k < users; ++k) out.push_back(y * pilots.col(k) / (amp * tau));
  return out;
}

ErrorSet draw_error_set(const EstimationSpec& spec, int count, int antennas, Rng& rng) {
  if (count < 1) throw ConfigError("error set: need at least one sample");
  if (antennas < 1) throw ConfigError("error set: antennas must be >= 1");
  const double var = spec.error_variance();
  ErrorSet set{.samples = {}, .spec = spec};
  set.samples.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) set.samples.push_back(complex_normal_vector(rng, antennas, var));
  return set;
}

ChannelList perturbed_channel_set(const CVector& estimate, const ErrorSet& errors) {
  ChannelList out;
  out.reserve(errors.size());
  for (const auto& e : errors.samples) {
    if (e.size() != estimate.size())
      throw ConfigError("perturbed set: error vector dimension does not match estimate");
    out.push_back(estimate + e);
  }
  return out;
}

}  // namespace evtp::channel
