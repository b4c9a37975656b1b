# Copyright 2026 The evtp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""EVT-based robust downlink power allocation."""

import json

from . import _core
from ._core import (
    ConfigError,
    EvtpError,
    gpd_fit,
    mrt_directions,
    outage_bound,
    sinr_target,
    tail_outage,
    worst_case_power,
    worst_case_sinr,
    zf_directions,
)

__all__ = [
    "ConfigError",
    "EvtpError",
    "allocate",
    "benchmark",
    "fig2",
    "gpd_fit",
    "mrt_directions",
    "outage_bound",
    "sinr_target",
    "sweep",
    "tail_outage",
    "worst_case_power",
    "worst_case_sinr",
    "zf_directions",
]


def _cfg(config):
    if config is None:
        return ""
    return config if isinstance(config, str) else json.dumps(config)


def allocate(config=None, seed=None, trials=None):
    return json.loads(_core.allocate(_cfg(config), seed, trials))[0]


def sweep(axis, values, config=None, seeds=1, trials=None):
    return json.loads(_core.sweep(_cfg(config), axis, list(values), seeds, trials))


def benchmark(config=None, seeds=1, radius=None, trials=None):
    return json.loads(_core.benchmark(_cfg(config), seeds, radius, trials))


def fig2(trials=None, noise_dbm=None, seed=1):
    return json.loads(_core.fig2(trials, noise_dbm, seed))
