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

#include "evtp/evt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "evtp/errors.hpp"

namespace evtp::evt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this |xi| the exponential limit replaces the power form.
constexpr double kShapeZero = 1e-8;

using Point = std::array<double, 2>;

struct Minimum {
  Point x;
  double f;
};

// Plain Nelder-Mead on R^2.
Minimum nelder_mead(const std::function<double(const Point&)>& f, Point start, Point step,
                    int max_iter = 4000) {
  std::array<Point, 3> p{start, start, start};
  p[1][0] += step[0];
  p[2][1] += step[1];
  std::array<double, 3> fv{f(p[0]), f(p[1]), f(p[2])};

  auto order = [&] {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    std::array<Point, 3> np{p[idx[0]], p[idx[1]], p[idx[2]]};
    std::array<double, 3> nf{fv[idx[0]], fv[idx[1]], fv[idx[2]]};
    p = np;
    fv = nf;
  };

  for (int it = 0; it < max_iter; ++it) {
    order();
    const double fspread = std::abs(fv[2] - fv[0]);
    const double xspread = std::max({std::abs(p[1][0] - p[0][0]), std::abs(p[2][0] - p[0][0]),
                                     std::abs(p[1][1] - p[0][1]), std::abs(p[2][1] - p[0][1])});
    if (std::isfinite(fv[2]) && fspread <= 1e-13 * (1.0 + std::abs(fv[0])) && xspread < 1e-10) break;

    const Point c{(p[0][0] + p[1][0]) / 2.0, (p[0][1] + p[1][1]) / 2.0};
    auto along = [&](double t) { return Point{c[0] + t * (p[2][0] - c[0]), c[1] + t * (p[2][1] - c[1])}; };

    const Point xr = along(-1.0);
    const double fr = f(xr);
    if (fr < fv[0]) {
      const Point xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        p[2] = xe;
        fv[2] = fe;
      } else {
        p[2] = xr;
        fv[2] = fr;
      }
    } else if (fr < fv[1]) {
      p[2] = xr;
      fv[2] = fr;
    } else {
      const bool outside = fr < fv[2];
      const Point xc = along(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < (outside ? fr : fv[2])) {
        p[2] = xc;
        fv[2] = fc;
      } else {
        for (int i = 1; i < 3; ++i) {
          p[i] = {p[0][0] + 0.5 * (p[i][0] - p[0][0]), p[0][1] + 0.5 * (p[i][1] - p[0][1])};
          fv[i] = f(p[i]);
        }
      }
    }
  }
  order();
  return {p[0], fv[0]};
}

// Probability-weighted-moment starting point; y is sorted ascending.
Point pwm_start(const std::vector<double>& y) {
  const auto n = static_cast<double>(y.size());
  const double a0 = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double a1 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    a1 += y[i] * (n - 1.0 - static_cast<double>(i)) / (n - 1.0);
  a1 /= n;
  double shape = 0.1;
  double scale = a0;
  const double den = a0 - 2.0 * a1;
  if (den > 0.0) {
    shape = 2.0 - a0 / den;
    scale = 2.0 * a0 * a1 / den;
  }
  if (!std::isfinite(shape) || !(scale > 0.0)) {
    shape = 0.1;
    scale = a0;
  }
  shape = std::clamp(shape, -0.9, 2.0);
  if (shape < 0.0) scale = std::max(scale, -shape * y.back() * 1.05);
  return {shape, std::log(scale)};
}

// -log-likelihood without validation, for the optimiser.
double neg_log_likelihood(std::span<const double> z, double shape, double scale) {
  if (!(scale > 0.0) || !(shape > -1.0)) return kInf;
  const auto n = static_cast<double>(z.size());
  double acc = 0.0;
  if (std::abs(shape) < kShapeZero) {
    for (double v : z) acc += v;
    return n * std::log(scale) + acc / scale;
  }
  for (double v : z) {
    const double t = shape * v / scale;
    if (!(t > -1.0)) return kInf;
    acc += std::log1p(t);
  }
  return n * std::log(scale) + (1.0 + 1.0 / shape) * acc;
}

}  // namespace

void TailConfig::validate() const {
  if (!(quantile > 0.0 && quantile < 1.0)) throw ConfigError("tail: quantile must lie in (0, 1)");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("tail: confidence must lie in (0, 1)");
  if (min_excesses < 1) throw ConfigError("tail: minimum excess count must be >= 1");
}

PsiSamples psi_transform(std::span<const double> sinr, double target) {
  if (!(target > 0.0)) throw DomainError("psi_transform: target must be > 0");
  PsiSamples out;
  out.psi.reserve(sinr.size());
  for (double g : sinr) {
    if (!(g > 0.0)) throw DomainError("psi_transform: SINR samples must be > 0");
    out.psi.push_back(-10.0 * std::log10(g));
  }
  out.phi = -10.0 * std::log10(target);
  return out;
}

Threshold threshold(std::span<const double> psi, double rho, int min_excesses) {
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("threshold: rho must lie in (0, 1)");
  const auto n = psi.size();
  if (n == 0 || static_cast<double>(n) * (1.0 - rho) < min_excesses - 1e-9)
    throw FitError("threshold: too few samples for " + std::to_string(min_excesses) + " excesses");
  std::vector<double> sorted(psi.begin(), psi.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw DegenerateError("threshold: all samples are equal");

  auto rank = static_cast<std::size_t>(std::ceil(rho * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  Threshold th;
  th.mu = sorted[rank - 1];
  for (std::size_t i = 0; i < n; ++i)
    if (psi[i] > th.mu) th.excess_indices.push_back(i);
  if (th.excess_indices.size() < static_cast<std::size_t>(min_excesses) && rank < n)
    throw DegenerateError("threshold: ties leave too few excesses above the quantile");
  if (th.excess_indices.empty()) throw DegenerateError("threshold: no sample exceeds the quantile");
  return th;
}

std::vector<double> excesses(std::span<const double> psi, const Threshold& th) {
  std::vector<double> z;
  z.reserve(th.excess_indices.size());
  for (auto i : th.excess_indices) z.push_back(psi[i] - th.mu);
  return z;
}

double gpd_cdf(double z, const GpdParams& params) {
  if (!(params.scale > 0.0)) throw DomainError("gpd_cdf: scale must be > 0");
  if (z <= 0.0) return 0.0;
  const double xi = params.shape;
  const double y = z / params.scale;
  if (std::abs(xi) < kShapeZero) return -std::expm1(-y);
  if (xi < 0.0 && z >= -params.scale / xi) return 1.0;
  return -std::expm1(-std::log1p(xi * y) / xi);
}

double gpd_log_likelihood(std::span<const double> excesses, const GpdParams& params) {
  if (!(params.scale > 0.0)) throw DomainError("gpd_log_likelihood: scale must be > 0");
  const auto n = static_cast<double>(excesses.size());
  double acc = 0.0;
  if (params.shape == 0.0) {
    for (double v : excesses) acc += v;
    return -n * std::log(params.scale) - acc / params.scale;
  }
  for (double v : excesses) {
    const double t = params.shape * v / params.scale;
    if (!(t > -1.0)) return -kInf;
    acc += std::log1p(t);
  }
  return -n * std::log(params.scale) - (1.0 + 1.0 / params.shape) * acc;
}

std::array<double, 4> gpd_observed_information(std::span<const double> excesses,
                                               const GpdParams& params) {
  const double xi = params.shape;
  const double s = params.scale;
  if (!(s > 0.0)) throw DomainError("gpd_observed_information: scale must be > 0");
  const auto n = static_cast<double>(excesses.size());

  double sum_log = 0.0;   // sum log(1 + xi u)
  double sum_a = 0.0;     // sum u / w
  double sum_a2 = 0.0;    // sum (u / w)^2
  double sum_u2 = 0.0, sum_u3 = 0.0, sum_u4 = 0.0;
  for (double z : excesses) {
    const double u = z / s;
    const double w = 1.0 + xi * u;
    if (!(w > 0.0)) throw DomainError("gpd_observed_information: parameters outside the support");
    sum_log += std::log1p(xi * u);
    sum_a += u / w;
    sum_a2 += (u / w) * (u / w);
    sum_u2 += u * u;
    sum_u3 += u * u * u;
    sum_u4 += u * u * u * u;
  }
  // Second derivatives of the negative log-likelihood.
  double d_xx;
  if (std::abs(xi) < 1e-5) {
    d_xx = -sum_u2 + 2.0 * sum_u3 / 3.0 + xi * (2.0 * sum_u3 - 1.5 * sum_u4);
  } else {
    d_xx = 2.0 * sum_log / (xi * xi * xi) - 2.0 * sum_a / (xi * xi) - (1.0 + 1.0 / xi) * sum_a2;
  }
  // In terms of z = u s: sum z/w = s sum_a, sum z^2/w^2 = s^2 sum_a2.
  const double d_ss = -n / (s * s) + 2.0 * (xi + 1.0) * sum_a / (s * s) - (xi + 1.0) * xi * sum_a2 / (s * s);
  const double d_xs = -sum_a / s + (xi + 1.0) * sum_a2 / s;
  return {d_xx, d_xs, d_xs, d_ss};
}

GpdFit gpd_fit(std::span<const double> excesses, double confidence, int min_excesses) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("gpd_fit: confidence must lie in (0, 1)");
  if (excesses.size() < static_cast<std::size_t>(std::max(min_excesses, 2)))
    throw FitError("gpd_fit: " + std::to_string(excesses.size()) + " excesses, need at least " +
                   std::to_string(min_excesses));
  for (double z : excesses)
    if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("gpd_fit: excesses must be finite and >= 0");

  // Fit on excesses normalised by their mean; the GPD scale is equivariant.
  const double mean = std::accumulate(excesses.begin(), excesses.end(), 0.0) /
                      static_cast<double>(excesses.size());
  if (!(mean > 0.0)) throw FitError("gpd_fit: all excesses are zero");
  std::vector<double> y(excesses.begin(), excesses.end());
  for (double& v : y) v /= mean;
  std::sort(y.begin(), y.end());
  if (y.back() - y.front() <= 1e-12 * y.back()) throw FitError("gpd_fit: excesses are all equal");

  auto objective = [&](const Point& p) { return neg_log_likelihood(y, p[0], std::exp(p[1])); };

  Minimum best{pwm_start(y), kInf};
  best.f = objective(best.x);
  std::mt19937_64 jitter(0x6770646669747ULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Point start = best.x;
  if (!std::isfinite(best.f)) start = {0.0, 0.0};
  for (int attempt = 0; attempt < 6; ++attempt) {
    const Minimum m = nelder_mead(objective, start, {0.1, 0.1});
    const bool improved = m.f < best.f - 1e-12 * (1.0 + std::abs(best.f));
    if (m.f < best.f) best = m;
    if (attempt > 0 && !improved && std::isfinite(best.f)) break;
    start = best.x;
    if (!std::isfinite(best.f)) start = {0.3 * unit(jitter), 0.3 * unit(jitter)};
    else if (attempt > 0) start = {best.x[0] + 0.05 * unit(jitter), best.x[1] + 0.05 * unit(jitter)};
  }
  if (!std::isfinite(best.f)) throw FitError("gpd_fit: likelihood maximisation did not converge");

  const GpdParams unit_fit{best.x[0], std::exp(best.x[1])};
  const auto info = gpd_observed_information(y, unit_fit);
  const double det = info[0] * info[3] - info[1] * info[2];
  if (!(info[0] > 0.0) || !(det > 0.0))
    throw FitError("gpd_fit: observed information is not positive definite");
  const double var_shape = info[3] / det;
  const double var_scale = info[0] / det;

  GpdFit fit;
  fit.mle = {unit_fit.shape, unit_fit.scale * mean};
  fit.shape_se = std::sqrt(var_shape);
  fit.scale_se = std::sqrt(var_scale) * mean;
  fit.excess_count = static_cast<int>(excesses.size());
  fit.confidence = confidence;
  fit.log_likelihood = gpd_log_likelihood(excesses, fit.mle);

  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(normal, 0.5 * (1.0 + confidence));
  fit.upper = {fit.mle.shape + z * fit.shape_se, fit.mle.scale + z * fit.scale_se};
  // The lower scale endpoint can cross zero for tiny samples; keep it a valid scale.
  fit.lower = {fit.mle.shape - z * fit.shape_se,
               std::max(fit.mle.scale - z * fit.scale_se, 1e-12 * fit.mle.scale)};
  return fit;
}

double outage_bound(const GpdParams& params, double phi, double mu, double rho) {
  if (!(params.scale > 0.0)) throw DomainError("outage_bound: scale must be > 0");
  const double tail = 1.0 - rho;
  const double x = phi - mu;
  if (x <= 0.0) return tail;
  const double xi = params.shape;
  if (xi < 0.0 && x >= -params.scale / xi) return 0.0;
  if (std::abs(xi) < kShapeZero) return tail * std::exp(-x / params.scale);
  return tail * std::exp(-std::log1p(xi * x / params.scale) / xi);
}

TailOutage tail_outage(std::span<const double> sinr, double target, const TailConfig& config) {
  config.validate();
  const PsiSamples ps = psi_transform(sinr, target);
  const Threshold th = threshold(ps.psi, config.quantile, config.min_excesses);
  const auto z = excesses(ps.psi, th);

  TailOutage out;
  out.phi = ps.phi;
  out.mu = th.mu;
  out.fit = gpd_fit(z, config.confidence, config.min_excesses);
  out.fit.threshold = th.mu;
  out.upper = outage_bound(out.fit.upper, ps.phi, th.mu, config.quantile);
  out.lower = outage_bound(out.fit.lower, ps.phi, th.mu, config.quantile);
  const auto above = std::count_if(ps.psi.begin(), ps.psi.end(), [&](double v) { return v > ps.phi; });
  out.exceed_fraction_at_target = static_cast<double>(above) / static_cast<double>(ps.psi.size());
  return out;
}

}  // namespace evtp::evt
