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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "evtp/benchmark.hpp"
#include "evtp/config.hpp"
#include "evtp/errors.hpp"
#include "evtp/evt.hpp"
#include "evtp/precoding.hpp"
#include "evtp/runner.hpp"

namespace py = pybind11;
using namespace evtp;

namespace {

ScenarioConfig parse(const std::string& text, std::optional<std::uint64_t> seed, std::optional<long long> trials) {
  auto c = ScenarioConfig::from_json(nlohmann::json::parse(text.empty() ? "{}" : text));
  if (seed) c.seed = *seed;
  if (trials) c.trials = *trials;
  c.validate();
  return c;
}

std::string rows_json(const std::vector<runner::ResultRow>& rows) {
  std::ostringstream os;
  runner::write_json(os, rows);
  return os.str();
}

ChannelList columns(const CMatrix& h) {
  ChannelList out;
  for (Eigen::Index k = 0; k < h.cols(); ++k) out.push_back(h.col(k));
  return out;
}

CMatrix stack(const std::vector<CVector>& u) {
  CMatrix out(u.empty() ? 0 : u.front().size(), static_cast<Eigen::Index>(u.size()));
  for (std::size_t k = 0; k < u.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = u[k];
  return out;
}

py::dict fit_dict(const evt::GpdFit& f) {
  py::dict d;
  d["shape"] = f.mle.shape;
  d["scale"] = f.mle.scale;
  d["shape_lower"] = f.lower.shape;
  d["shape_upper"] = f.upper.shape;
  d["scale_lower"] = f.lower.scale;
  d["scale_upper"] = f.upper.scale;
  d["shape_se"] = f.shape_se;
  d["scale_se"] = f.scale_se;
  d["excess_count"] = f.excess_count;
  d["log_likelihood"] = f.log_likelihood;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<Error>(m, "EvtpError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("allocate",
        [](const std::string& config, std::optional<std::uint64_t> seed, std::optional<long long> trials) {
          const auto c = parse(config, seed, trials);
          return rows_json({runner::run_allocate(c, c.seed)});
        },
        py::arg("config") = "", py::arg("seed") = py::none(), py::arg("trials") = py::none());

  m.def("sweep",
        [](const std::string& config, const std::string& axis, const std::vector<double>& values, int seeds,
           std::optional<long long> trials) {
          const auto c = parse(config, std::nullopt, trials);
          return rows_json(runner::run_sweep(c, runner::parse_axis(axis), values, seeds));
        },
        py::arg("config"), py::arg("axis"), py::arg("values"), py::arg("seeds") = 1,
        py::arg("trials") = py::none());

  m.def("benchmark",
        [](const std::string& config, int seeds, std::optional<double> radius, std::optional<long long> trials) {
          const auto c = parse(config, std::nullopt, trials);
          return rows_json(runner::run_benchmark_compare(c, {.seeds = seeds, .radius = radius, .run = {}}));
        },
        py::arg("config") = "", py::arg("seeds") = 1, py::arg("radius") = py::none(),
        py::arg("trials") = py::none());

  m.def("fig2",
        [](std::optional<long long> trials, std::optional<double> noise_dbm, std::uint64_t seed) {
          runner::Fig2Options o;
          o.noise_dbm = noise_dbm;
          o.seed = seed;
          if (trials)
            for (auto& c : o.cases) c.trials = *trials;
          return runner::fig2_json(runner::run_fig2(o)).dump();
        },
        py::arg("trials") = py::none(), py::arg("noise_dbm") = py::none(), py::arg("seed") = 1);

  m.def("gpd_fit", [](const std::vector<double>& z, double confidence) { return fit_dict(evt::gpd_fit(z, confidence)); },
        py::arg("excesses"), py::arg("confidence") = 0.8);

  m.def("tail_outage",
        [](const std::vector<double>& sinr, double target, double quantile, double confidence) {
          const auto t = evt::tail_outage(sinr, target, {.quantile = quantile, .confidence = confidence});
          py::dict d = fit_dict(t.fit);
          d["phi"] = t.phi;
          d["mu"] = t.mu;
          d["upper"] = t.upper;
          d["lower"] = t.lower;
          return d;
        },
        py::arg("sinr"), py::arg("target"), py::arg("quantile") = 0.95, py::arg("confidence") = 0.8);

  m.def("outage_bound",
        [](double shape, double scale, double phi, double mu, double rho) {
          return evt::outage_bound({shape, scale}, phi, mu, rho);
        },
        py::arg("shape"), py::arg("scale"), py::arg("phi"), py::arg("mu"), py::arg("rho"));

  m.def("sinr_target",
        [](double bits, int frame, int pilots) {
          return precoding::sinr_target({.payload_bits = bits, .frame_length = frame, .pilot_length = pilots});
        },
        py::arg("payload_bits") = 256.0, py::arg("frame_length") = 42, py::arg("pilot_length") = 1);

  m.def("mrt_directions", [](const CMatrix& h) { return stack(precoding::mrt_directions(columns(h))); },
        "Unit MRT directions for the columns of an M x K estimate matrix.");
  m.def("zf_directions", [](const CMatrix& h) { return stack(precoding::zf_directions(columns(h))); },
        "Unit ZF directions for the columns of an M x K estimate matrix.");

  m.def("worst_case_power", &benchmark::worst_case_power, py::arg("estimate"), py::arg("radius"),
        py::arg("sinr_target"), py::arg("noise"));
  m.def("worst_case_sinr", &benchmark::worst_case_sinr, py::arg("precoder"), py::arg("estimate"), py::arg("radius"),
        py::arg("noise"));
}
