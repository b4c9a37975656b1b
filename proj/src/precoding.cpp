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

#include "evtp/precoding.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "evtp/errors.hpp"

namespace evtp::precoding {

Method parse_method(std::string_view name) {
  if (name == "mrt" || name == "MRT") return Method::mrt;
  if (name == "zf" || name == "ZF") return Method::zf;
  throw ConfigError("unknown precoder method '" + std::string(name) + "'");
}

std::string_view to_string(Method m) { return m == Method::mrt ? "mrt" : "zf"; }

CVector PrecoderSet::precoder(std::size_t k) const { return std::sqrt(powers.at(k)) * directions.at(k); }

double PrecoderSet::total_power() const { return std::accumulate(powers.begin(), powers.end(), 0.0); }

void PrecoderSet::validate() const {
  if (directions.size() != powers.size())
    throw ConfigError("precoders: one power per direction required");
  for (std::size_t k = 0; k < size(); ++k) {
    if (std::abs(directions[k].norm() - 1.0) > 1e-12)
      throw ConfigError("precoders: direction " + std::to_string(k) + " is not unit norm");
    if (!(powers[k] >= 0.0) || !std::isfinite(powers[k]))
      throw ConfigError("precoders: power " + std::to_string(k) + " must be finite and >= 0");
  }
}

std::vector<CVector> mrt_directions(const ChannelList& estimates) {
  std::vector<CVector> out;
  out.reserve(estimates.size());
  for (const auto& h : estimates) {
    const double norm = h.norm();
    if (!(norm > 0.0)) throw DegenerateError("mrt: zero channel estimate");
    out.push_back(h / norm);
  }
  return out;
}

std::vector<CVector> zf_directions(const ChannelList& estimates) {
  if (estimates.empty()) return {};
  const auto k = static_cast<Eigen::Index>(estimates.size());
  const Eigen::Index m = estimates.front().size();
  if (k > m) throw RankError("zf: more users than antennas");
  CMatrix h(m, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (estimates[i].size() != m) throw ConfigError("zf: estimate size mismatch");
    h.col(i) = estimates[i];
  }
  // Column scaling leaves the normalised ZF directions unchanged and keeps the
  // condition test independent of per-user gains.
  RVector scale(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    scale[i] = h.col(i).norm();
    if (!(scale[i] > 0.0)) throw DegenerateError("zf: zero channel estimate");
  }
  const CMatrix hn = h * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<CMatrix> svd(hn);
  const RVector sv = svd.singularValues();
  if (!(sv[k - 1] > 0.0) || sv[0] / sv[k - 1] > kZfConditionLimit)
    throw RankError("zf: estimate matrix is rank deficient");
  // Z = Hn (Hn^H Hn)^-1 via a QR solve: Hn = Q R  =>  Z = Q R^-H.
  Eigen::HouseholderQR<CMatrix> qr(hn);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(m, k);
  const CMatrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const CMatrix r_inv_h = r.adjoint().triangularView<Eigen::Lower>().solve(CMatrix::Identity(k, k));
  const CMatrix z = q * r_inv_h;
  std::vector<CVector> out;
  out.reserve(estimates.size());
  for (Eigen::Index i = 0; i < k; ++i) out.push_back(z.col(i) / z.col(i).norm());
  return out;
}

std::vector<CVector> directions(Method method, const ChannelList& estimates) {
  return method == Method::mrt ? mrt_directions(estimates) : zf_directions(estimates);
}

double sinr(const PrecoderSet& precoders, const CVector& channel, std::size_t ue, double noise) {
  const std::size_t k_users = precoders.size();
  if (ue >= k_users) throw ConfigError("sinr: user index out of range");
  double signal = 0.0;
  double interference = 0.0;
  for (std::size_t i = 0; i < k_users; ++i) {
    const double gain = std::norm(channel.dot(precoders.directions[i])) * precoders.powers[i];
    if (i == ue)
      signal = gain;
    else
      interference += gain;
  }
  return signal / (interference + noise);
}

std::vector<double> sinr_samples(const PrecoderSet& precoders, std::span<const CVector> channels,
                                 std::size_t ue, double noise) {
  std::vector<double> out;
  out.reserve(channels.size());
  for (const auto& h : channels) out.push_back(sinr(precoders, h, ue, noise));
  return out;
}

void SinrTargetSpec::validate() const {
  if (!(payload_bits >= 0.0)) throw ConfigError("sinr target: payload bits must be >= 0");
  if (pilot_length < 1) throw ConfigError("sinr target: pilot length must be >= 1");
  if (pilot_length >= frame_length)
    throw ConfigError("sinr target: pilot length must be shorter than the frame");
}

double sinr_target(const SinrTargetSpec& spec) {
  spec.validate();
  return std::exp2(spec.payload_bits / spec.downlink_symbols()) - 1.0;
}

}  // namespace evtp::precoding
