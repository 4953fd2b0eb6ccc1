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

import cmath
import math

import numpy as np
import pytest

import anyonlab


def test_version():
    assert anyonlab.__version__ == "0.1.0"


def test_closed_forms_on_default_apparatus():
    app = anyonlab.Apparatus.paper_example()
    assert app.prob_ordinary() == pytest.approx((0.9, 0.1), abs=1e-12)
    assert app.prob_ab(-1) == pytest.approx((0.1, 0.9), abs=1e-12)
    assert app.prob_na(1j) == pytest.approx((0.2, 0.8), abs=1e-12)
    assert app.prob_na(-0.5) == pytest.approx((0.3, 0.7), abs=1e-12)


def test_custom_apparatus_matches_path_sum():
    h = math.sqrt(0.5)
    app = anyonlab.Apparatus(t1=1j * h, r1=h, t2=1j * h, r2=h, theta=0.3)
    t, r = 1j * h, h
    r_prime, t_prime = r.conjugate(), -t.conjugate()
    d1 = abs(t * r_prime * cmath.exp(0.3j) + r * t) ** 2
    assert app.prob_ordinary()[0] == pytest.approx(d1, abs=1e-12)
    with pytest.raises(anyonlab.AnyonLabError):
        anyonlab.Apparatus(t1=1, r1=1, t2=h, r2=h)


def test_fixtures():
    assert "explicitR2" in anyonlab.list_fixtures()
    m = anyonlab.fixture_monodromy("explicitR2")
    assert m.shape == (6, 6)
    np.testing.assert_allclose(m @ m.conj().T, np.eye(6), atol=1e-12)
    assert sorted(round(z.real) for z in anyonlab.fixture_eigenvalues("explicitR2")) == [-1, 1]
    code, text = anyonlab.verify("explicitR2")
    assert code == 0 and "FAIL" not in text


def test_compute_u_for_plus_beam():
    m = anyonlab.fixture_monodromy("explicitR2")
    rho_b = np.array([[1, 0], [0, 0]], dtype=complex)
    u, eigenvalues = anyonlab.compute_u(m, rho_b, 2, 3)
    np.testing.assert_allclose(u, np.diag([-0.5, 1, -0.5]), atol=1e-12)
    assert sorted(z.real for z in eigenvalues) == pytest.approx([-0.5, 1])


def test_simulate_preset():
    config = anyonlab.preset("paper_one_to_one_38")
    config["trials"] = 2000
    config["runs"] = 200
    summary = anyonlab.simulate(config, threads=2)
    assert summary["config_hash"] == anyonlab.config_hash(config)
    assert summary["locked_trials"] == 2000
    freqs = {round(lock["eigenvalue"][0]): lock["frequency"] for lock in summary["locks"]}
    sigma = math.sqrt(0.375 * 0.625 / 2000)
    assert abs(freqs[1] - 0.375) < 4 * sigma
    assert summary == anyonlab.simulate(config, threads=1)


def test_invalid_config_raises():
    config = anyonlab.preset("paper_one_to_one_38")
    config["trials"] = 0
    with pytest.raises(anyonlab.AnyonLabError, match="trials"):
        anyonlab.simulate(config)


def test_convergence_analysis():
    a, b = (0.9, 0.1), (0.1, 0.9)
    d = anyonlab.z_distribution(a, b, 0.5, 1)
    assert [z for z, _ in d["mixed"]] == pytest.approx([-math.log(9), math.log(9)])
    m = anyonlab.moments(a, b, 0.375, 100)
    assert m["mean_a"] == pytest.approx(100 * 0.8 * math.log(9), rel=1e-9)
    upper, lower, mid = anyonlab.locking_masses(a, b, 0.375, 200)
    assert upper == pytest.approx(0.375, abs=1e-6)
    assert lower == pytest.approx(0.625, abs=1e-6)
    assert mid < 1e-6
