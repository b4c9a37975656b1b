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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace evtp::evt {

inline constexpr int kDefaultMinExcesses = 30;

// Peaks-over-threshold settings. The concave transform is fixed to
// f(x) = 10 log10(x).
struct TailConfig {
  double quantile = 0.95;    // rho
  double confidence = 0.8;   // Gamma
  int min_excesses = kDefaultMinExcesses;

  void validate() const;
};

struct GpdParams {
  double shape = 0.0;  // xi
  double scale = 1.0;  // upsilon
};

struct GpdFit {
  GpdParams mle;
  GpdParams lower;  // (xi_LB, upsilon_LB)
  GpdParams upper;  // (xi_UB, upsilon_UB)
  double threshold = 0.0;  // mu, dB; filled in by callers that know it
  int excess_count = 0;
  double confidence = 0.0;
  double shape_se = 0.0;
  double scale_se = 0.0;
  double log_likelihood = 0.0;
};

struct PsiSamples {
  std::vector<double> psi;  // 10 log10(1 / gamma_n)
  double phi = 0.0;         // 10 log10(1 / gamma_tar)
};

PsiSamples psi_transform(std::span<const double> sinr, double target);

struct Threshold {
  double mu = 0.0;
  std::vector<std::size_t> excess_indices;  // psi[i] > mu, in input order
};

// Empirical rho-quantile (order statistic at ceil(rho N), 1-based) and the
// samples strictly above it.
Threshold threshold(std::span<const double> psi, double rho,
                    int min_excesses = kDefaultMinExcesses);

std::vector<double> excesses(std::span<const double> psi, const Threshold& th);

double gpd_cdf(double z, const GpdParams& params);

// Log-likelihood of excesses under GPD(params); -inf outside the support.
double gpd_log_likelihood(std::span<const double> excesses, const GpdParams& params);

// Observed information (negative Hessian of the log-likelihood) in
// (shape, scale) order, row-major 2x2.
std::array<double, 4> gpd_observed_information(std::span<const double> excesses,
                                               const GpdParams& params);

// Maximum-likelihood GPD fit with per-parameter two-sided Wald intervals at
// level `confidence`.
GpdFit gpd_fit(std::span<const double> excesses, double confidence,
               int min_excesses = kDefaultMinExcesses);

// (1 - rho) (1 + xi/upsilon (phi - mu))^(-1/xi), saturated to 1 - rho when
// phi <= mu and 0 beyond a finite upper endpoint.
double outage_bound(const GpdParams& params, double phi, double mu, double rho);

// Result of the whole transform -> threshold -> fit -> bound chain for one
// user's SINR samples.
struct TailOutage {
  double phi = 0.0;
  double mu = 0.0;
  GpdFit fit;
  double upper = 1.0;   // bound from the upper parameter pair
  double lower = 1.0;   // bound from the lower parameter pair
  double exceed_fraction_at_target = 0.0;  // fraction of psi > phi
};

TailOutage tail_outage(std::span<const double> sinr, double target, const TailConfig& config);

}  // namespace evtp::evt
