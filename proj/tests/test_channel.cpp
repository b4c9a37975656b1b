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

#include "doctest.h"

#include <cmath>
#include <numbers>

#include "evtp/channel.hpp"
#include "evtp/errors.hpp"

using namespace evtp;
using namespace evtp::channel;

namespace {

constexpr double kPi = std::numbers::pi;

CorrelationSpec spec8(double az) {
  return {.antennas = 8, .gain = 2.5, .azimuth = az, .angular_std = kPi / 36, .clusters = 10,
          .cluster_halfwidth = 2 * kPi / 9};
}

CMatrix sample_covariance(const FadingModel& model, int draws, std::uint64_t seed) {
  ChannelSampler s(model);
  Rng rng(seed);
  const auto m = dimension(model);
  CMatrix c = CMatrix::Zero(m, m);
  for (int i = 0; i < draws; ++i) {
    const CVector h = s(rng);
    c += h * h.adjoint();
  }
  return c / draws;
}

}  // namespace

TEST_CASE("single antenna correlation") {
  const CMatrix r = correlation_matrix({.antennas = 1, .gain = 1.0}, std::vector<double>{0.3});
  CHECK(r.rows() == 1);
  CHECK(r(0, 0) == cdouble{1.0, 0.0});
}

TEST_CASE("two antenna correlation at broadside") {
  const CMatrix r = correlation_matrix({.antennas = 2, .gain = 1.0, .angular_std = kPi / 36}, std::vector<double>{0.0});
  const double expect = std::exp(-0.5 * std::pow(kPi / 36, 2) * kPi * kPi);
  CHECK(std::abs(r(0, 1)) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(std::abs(r(0, 1)) == doctest::Approx(0.9631).epsilon(1e-4));
}

TEST_CASE("correlation is Hermitian PSD with trace M beta") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto spec = spec8(std::uniform_real_distribution<double>(0, 2 * kPi)(rng));
    const CMatrix r = correlation_matrix(spec, rng);
    CHECK((r - r.adjoint()).norm() == 0.0);
    CHECK(std::abs(r.trace() - cdouble{8 * 2.5, 0.0}) < 1e-12);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(r);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * spec.gain);
  }
}

TEST_CASE("Rician LOS limit") {
  const int m = 6;
  const double beta = 3e-12;
  const auto phases = ula_phases(m, 0.7);
  Rician ric{.k_factor = 1e12, .correlation = beta * CMatrix::Identity(m, m), .gain = beta, .los_phases = phases};
  Rng rng(2);
  const CVector h = sample_channel(ric, rng);
  CVector los(m);
  los[0] = 1.0;
  for (int i = 1; i < m; ++i) los[i] = std::polar(1.0, kPi * i * std::sin(0.7));
  los *= std::sqrt(beta);
  CHECK((h - los).norm() / los.norm() < 1e-5);
}

TEST_CASE("Rayleigh sample covariance") {
  const double beta = 1.7;
  const auto white = sample_covariance(CorrelatedRayleigh{beta * CMatrix::Identity(4, 4)}, 100000, 1);
  for (int i = 0; i < 4; ++i) CHECK(white(i, i).real() == doctest::Approx(beta).epsilon(0.05));

  Rng rng(9);
  const CMatrix r = correlation_matrix({.antennas = 4, .gain = beta, .azimuth = 0.4, .clusters = 3}, rng);
  const auto c = sample_covariance(CorrelatedRayleigh{r}, 100000, 2);
  CHECK((c - r).cwiseAbs().maxCoeff() < 0.05 * beta);

  Rician k0{.k_factor = 0.0, .correlation = r, .gain = beta, .los_phases = ula_phases(4, 0.4)};
  const auto c0 = sample_covariance(k0, 100000, 3);
  CHECK((c0 - r).cwiseAbs().maxCoeff() < 0.05 * beta);
}

TEST_CASE("pilot matrices") {
  CHECK(pilot_matrix(1, 1)(0, 0) == cdouble{1.0, 0.0});
  const CMatrix s = pilot_matrix(2, 2);
  CHECK((s.adjoint() * s - 2.0 * CMatrix::Identity(2, 2)).norm() < 1e-12);
  const CMatrix s5 = pilot_matrix(3, 5);
  CHECK((s5.adjoint() * s5 - 5.0 * CMatrix::Identity(3, 3)).norm() < 1e-12);
  CHECK_THROWS_AS(pilot_matrix(3, 2), ConfigError);
}

TEST_CASE("noiseless LS estimation is exact") {
  Rng rng(4);
  ChannelList h{complex_normal_vector(rng, 4, 1.0), complex_normal_vector(rng, 4, 1.0)};
  const EstimationSpec spec{.uplink_power = 0.1, .pilot_length = 2, .noise_power = 0.0};
  const auto est = ls_estimate(h, pilot_matrix(2, 2), spec, rng);
  CHECK((est[0] - h[0]).norm() < 1e-14);
  CHECK((est[1] - h[1]).norm() < 1e-14);
  const auto one = ls_estimate({h[0]}, pilot_matrix(1, 1), {.uplink_power = 0.1, .pilot_length = 1}, rng);
  CHECK((one[0] - h[0]).norm() < 1e-15);
}

TEST_CASE("LS error variance") {
  for (auto [p, tau] : {std::pair{0.1, 1}, std::pair{0.1, 3}, std::pair{2.0, 2}}) {
    const EstimationSpec spec{.uplink_power = p, .pilot_length = tau, .noise_power = 1e-3};
    const CVector h = CVector::Constant(2, cdouble{0.3, -0.1});
    const CMatrix pilots = pilot_matrix(1, tau);
    Rng rng(100 + tau);
    double acc = 0.0;
    const int reps = 100000;
    for (int r = 0; r < reps; ++r) acc += (ls_estimate({h}, pilots, spec, rng)[0] - h).squaredNorm();
    CHECK(acc / (2.0 * reps) == doctest::Approx(spec.error_variance()).epsilon(0.05));
  }
}

TEST_CASE("error sets") {
  const EstimationSpec spec{.uplink_power = 0.1, .pilot_length = 1, .noise_power = 1e-3};
  Rng a(7), b(7);
  const auto s1 = draw_error_set(spec, 100000, 2, a);
  const auto s2 = draw_error_set(spec, 100000, 2, b);
  CHECK(s1.samples == s2.samples);
  double acc = 0.0;
  for (const auto& e : s1.samples) acc += e.squaredNorm();
  CHECK(acc / (2.0 * s1.size()) == doctest::Approx(spec.error_variance()).epsilon(0.05));

  Rng z(1);
  const auto zero = draw_error_set({.uplink_power = 0.1, .pilot_length = 1, .noise_power = 0.0}, 10, 3, z);
  for (const auto& e : zero.samples) CHECK(e.norm() == 0.0);
}

TEST_CASE("perturbed channel set") {
  Rng rng(8);
  const EstimationSpec spec{.uplink_power = 0.1, .pilot_length = 1, .noise_power = 1e-2};
  const auto errs = draw_error_set(spec, 200, 3, rng);
  const CVector est = complex_normal_vector(rng, 3, 1.0);
  const auto set = perturbed_channel_set(est, errs);
  REQUIRE(set.size() == errs.size());
  for (std::size_t n = 0; n < set.size(); ++n) {
    CHECK(set[n] == est + errs.samples[n]);
    CHECK((set[n] - est - errs.samples[n]).cwiseAbs().maxCoeff() <= 4e-16 * set[n].cwiseAbs().maxCoeff());
  }
  const auto from_zero = perturbed_channel_set(CVector::Zero(3), errs);
  CHECK(from_zero == errs.samples);

  Rng z(1);
  const auto zero = draw_error_set({.uplink_power = 0.1, .pilot_length = 1, .noise_power = 0.0}, 5, 3, z);
  for (const auto& h : perturbed_channel_set(est, zero)) CHECK(h == est);
  CHECK_THROWS_AS(perturbed_channel_set(CVector::Zero(2), errs), ConfigError);
}
