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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evtp/errors.hpp"
#include "evtp/evt.hpp"
#include "gpd_sample.hpp"

using namespace evtp;
using namespace evtp::evt;

TEST_CASE("psi transform") {
  const std::vector<double> g{100.0, 1.0};
  const auto ps = psi_transform(g, 74.79);
  CHECK(ps.psi[0] == doctest::Approx(-20.0));
  CHECK(ps.psi[1] == 0.0);
  CHECK(ps.phi == doctest::Approx(-18.738).epsilon(1e-4));
}

TEST_CASE("threshold counts") {
  Rng rng(1);
  std::vector<double> psi(10000);
  std::normal_distribution<double> n;
  for (auto& v : psi) v = n(rng);
  const auto th = threshold(psi, 0.95);
  CHECK(th.excess_indices.size() == 500);
  auto sorted = psi;
  std::sort(sorted.begin(), sorted.end());
  CHECK(th.mu == sorted[9499]);
  const double frac = static_cast<double>(th.excess_indices.size()) / psi.size();
  CHECK(std::abs(frac - 0.05) <= 1.0 / psi.size());

  const auto low = threshold(psi, 1e-9);
  CHECK(low.mu == sorted.front());
  CHECK(low.excess_indices.size() == psi.size() - 1);

  CHECK_THROWS_AS(threshold(std::vector<double>(1000, 2.0), 0.95), DegenerateError);
  CHECK_THROWS_AS(threshold(std::vector<double>(psi.begin(), psi.begin() + 100), 0.95), FitError);
}

TEST_CASE("GPD cdf") {
  CHECK(gpd_cdf(0.0, {0.3, 1.0}) == 0.0);
  CHECK(gpd_cdf(1.0, {1.0, 1.0}) == doctest::Approx(0.5));
  CHECK(gpd_cdf(2.0, {1e-12, 2.0}) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-10));
  for (double z : {0.1, 1.0, 5.0}) {
    CHECK(std::abs(gpd_cdf(z, {0.99e-8, 1.5}) - gpd_cdf(z, {1.01e-8, 1.5})) < 1e-6);
    CHECK(std::abs(gpd_cdf(z, {-0.99e-8, 1.5}) - gpd_cdf(z, {-1.01e-8, 1.5})) < 1e-6);
  }
  double prev = 0.0;
  for (double z = 0.0; z < 10.0; z += 0.05) {
    const double c = gpd_cdf(z, {-0.3, 1.0});
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("outage bound") {
  CHECK(outage_bound({0.2, 1.0}, 3.0, 3.0, 0.95) == doctest::Approx(0.05));
  CHECK(outage_bound({0.2, 1.0}, 1.0, 3.0, 0.95) == doctest::Approx(0.05));
  CHECK(outage_bound({0.1, 2.0}, 5.0, 0.0, 0.95) == doctest::Approx(0.05 * std::pow(1.25, -10.0)).epsilon(1e-12));
  CHECK(outage_bound({0.1, 2.0}, 5.0, 0.0, 0.95) == doctest::Approx(5.37e-3).epsilon(1e-3));
  CHECK(outage_bound({-0.5, 1.0}, 3.0, 0.0, 0.95) == 0.0);
  double prev = 1.0;
  for (double x = 0.0; x < 20.0; x += 0.25) {
    const double b = outage_bound({0.25, 1.3}, x, 0.0, 0.9);
    CHECK(b <= prev);
    CHECK(b == doctest::Approx(0.1 * (1.0 - gpd_cdf(x, {0.25, 1.3}))).epsilon(1e-12));
    prev = b;
  }
}

TEST_CASE("GPD fit recovers synthetic parameters") {
  Rng rng(42);
  const auto z = testing::gpd_draws(0.2, 1.0, 100000, rng);
  const auto fit = gpd_fit(z, 0.8);
  CHECK(std::abs(fit.mle.shape - 0.2) < 0.02);
  CHECK(std::abs(fit.mle.scale - 1.0) < 0.02);
  CHECK(fit.excess_count == 100000);
  CHECK(fit.lower.shape < fit.mle.shape);
  CHECK(fit.upper.shape > fit.mle.shape);
  CHECK(fit.lower.scale < fit.mle.scale);
  CHECK(fit.upper.scale > fit.mle.scale);

  std::exponential_distribution<double> ex(1.0 / 3.0);
  std::vector<double> e(100000);
  for (auto& v : e) v = ex(rng);
  const auto fe = gpd_fit(e, 0.8);
  CHECK(std::abs(fe.mle.shape) < 0.02);
  CHECK(std::abs(fe.mle.scale - 3.0) < 0.1);

  CHECK_THROWS_AS(gpd_fit(std::vector<double>{1, 2, 3, 4, 5}, 0.8), FitError);
}

TEST_CASE("fit is scale equivariant") {
  Rng rng(3);
  const auto z = testing::gpd_draws(-0.1, 2.0, 2000, rng);
  auto z10 = z;
  for (auto& v : z10) v *= 10.0;
  const auto a = gpd_fit(z, 0.9);
  const auto b = gpd_fit(z10, 0.9);
  CHECK(b.mle.shape == doctest::Approx(a.mle.shape).epsilon(1e-6));
  CHECK(b.mle.scale == doctest::Approx(10.0 * a.mle.scale).epsilon(1e-6));
}

TEST_CASE("MLE is a stationary point of the likelihood") {
  Rng rng(5);
  for (double xi : {-0.2, 0.0, 0.3}) {
    const auto z = testing::gpd_draws(xi, 0.5, 5000, rng);
    const auto fit = gpd_fit(z, 0.8);
    const double l0 = gpd_log_likelihood(z, fit.mle);
    for (double dx : {-1e-3, 1e-3}) {
      CHECK(gpd_log_likelihood(z, {fit.mle.shape + dx, fit.mle.scale}) <= l0 + 1e-9);
      CHECK(gpd_log_likelihood(z, {fit.mle.shape, fit.mle.scale * (1 + dx)}) <= l0 + 1e-9);
    }
  }
}

TEST_CASE("observed information matches finite differences") {
  Rng rng(6);
  for (double xi : {-0.2, 0.0, 1e-7, 0.3}) {
    const auto z = testing::gpd_draws(xi == 1e-7 ? 0.0 : xi, 1.0, 3000, rng);
    const GpdParams p{xi, 1.1};
    const auto info = gpd_observed_information(z, p);
    const double h = 1e-4;
    auto ll = [&](double a, double b) { return gpd_log_likelihood(z, {a, b}); };
    const double d_ss = -(ll(xi + h, 1.1) - 2 * ll(xi, 1.1) + ll(xi - h, 1.1)) / (h * h);
    const double d_uu = -(ll(xi, 1.1 + h) - 2 * ll(xi, 1.1) + ll(xi, 1.1 - h)) / (h * h);
    const double d_su = -(ll(xi + h, 1.1 + h) - ll(xi + h, 1.1 - h) - ll(xi - h, 1.1 + h) + ll(xi - h, 1.1 - h)) /
                        (4 * h * h);
    CHECK(info[0] == doctest::Approx(d_ss).epsilon(1e-3));
    CHECK(info[1] == doctest::Approx(d_su).epsilon(1e-3));
    CHECK(info[2] == doctest::Approx(d_su).epsilon(1e-3));
    CHECK(info[3] == doctest::Approx(d_uu).epsilon(1e-3));
  }
}

TEST_CASE("tail outage chain") {
  Rng rng(7);
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> sinr(10000);
  for (auto& v : sinr) v = 100.0 * ex(rng);
  const auto t = tail_outage(sinr, 1.0, {});
  CHECK(t.fit.excess_count == 500);
  CHECK(t.upper >= t.lower);
  const double truth = -std::expm1(-0.01);
  CHECK(t.lower < truth * 3);
  CHECK(t.upper > truth / 3);
}
