# Copyright 2026 The AnyonLab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Simulator for Mach-Zehnder interference of non-abelian anyons."""

import json

from ._core import (
    AnyonLabError,
    Apparatus,
    __version__,
    compute_u,
    fixture_eigenvalues,
    fixture_monodromy,
    list_fixtures,
    locking_masses,
    moments,
    preset_names,
    verify,
    z_distribution,
)
from . import _core


def preset(name):
    """Returns the builtin experiment config `name` as a dict."""
    return json.loads(_core.preset_json(name))


def config_hash(config):
    return _core.config_hash_json(json.dumps(config))


def simulate(config, threads=1):
    """Runs an experiment and returns its summary as a dict.

    `config` is a config dict or the name of a builtin preset.
    """
    if isinstance(config, str):
        config = preset(config)
    return json.loads(_core.simulate_json(json.dumps(config), threads))


__all__ = [
    "AnyonLabError",
    "Apparatus",
    "__version__",
    "compute_u",
    "config_hash",
    "fixture_eigenvalues",
    "fixture_monodromy",
    "list_fixtures",
    "locking_masses",
    "moments",
    "preset",
    "preset_names",
    "simulate",
    "verify",
    "z_distribution",
]
