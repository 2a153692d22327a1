import json
import math
import pathlib

import numpy as np
import pytest

import mixhess

ROOT = pathlib.Path(__file__).resolve().parents[2]
CONFIGS = ROOT / "configs"


def config(name, **overrides):
    text = (CONFIGS / name).read_text()
    for key, value in overrides.items():
        lines = [f"{key} = {value}" if l.split("=")[0].strip() == key else l for l in text.splitlines()]
        text = "\n".join(lines) + "\n"
    return text


def test_sigma():
    assert mixhess.sigma(2, [1, 2, 3]) == pytest.approx(11.0)
    assert mixhess.sigma(0, [1, 2, 3]) == 1.0
    assert mixhess.sigma_reduced(1, [1, 2, 3], [0]) == pytest.approx(5.0)


def test_cone():
    member, sigmas = mixhess.in_cone(2, [1, 1, -0.4])
    assert member
    assert sigmas == pytest.approx([1.6, 0.2])
    assert not mixhess.in_cone(2, [1, 1, -0.6])[0]
    for lam in mixhess.sample_cone(2, 3, 7, 20):
        assert mixhess.in_cone(2, lam)[0]


def test_hermitian_eigen():
    h = np.array([[2, 1j], [-1j, 2]])
    lam, vectors, residual = mixhess.hermitian_eigen(h)
    assert sorted(lam) == pytest.approx([1.0, 3.0])
    assert residual < 1e-12
    assert np.allclose(vectors.conj().T @ vectors, np.eye(2))


def test_complex_hessian_of_quadratic():
    # |z_1|^2 has D2 = 2 I on (t_1, t_3); the complex Hessian entry is 1.
    d2 = np.zeros((4, 4))
    d2[0, 0] = d2[2, 2] = 2.0
    h = mixhess.to_complex_hessian(d2)
    assert h[0, 0] == pytest.approx(1.0)
    assert abs(h[1, 1]) < 1e-15


def test_operator_values():
    # n = k = 2 at the identity: sigma_2/sigma_1 - alpha_0/sigma_1 = (1 - alpha_0)/2.
    assert mixhess.g_value(2, [1, 1], [1, 1]) == pytest.approx(0.0)
    assert mixhess.g_value(2, [0, 0], [1, 1]) == pytest.approx(0.5)
    grad = mixhess.g_gradient(2, [0.5, 0.5], np.eye(2))
    assert np.allclose(grad, 0.375 * np.eye(2))


def test_constants():
    a = mixhess.compute_A(2, 2, [1, 1])
    assert a == pytest.approx((1 + math.sqrt(2)) / 2, abs=1e-9)
    assert mixhess.compute_M0(2, 2, [1, 1], 1.0, 2.0) == pytest.approx(1 + 8 * a, abs=1e-8)


def test_radial_profile():
    p = mixhess.march(2, 2, 1.0, [[1.0], [1.0]])
    assert p.g0 == pytest.approx(1 + math.sqrt(2), abs=1e-9)
    assert p.g_end == pytest.approx(1 + math.sqrt(2), abs=1e-9)
    c = mixhess.radial_neumann(p, 0.0, 0.0)["c"]
    assert c == pytest.approx(2 * (1 + math.sqrt(2)), abs=1e-9)


def test_config_roundtrip():
    text = config("radial_solve.cfg")
    once = mixhess.config_roundtrip(text)
    assert mixhess.config_roundtrip(once) == once
    with pytest.raises(ValueError):
        mixhess.config_roundtrip("[a]\nkey\n")


def test_solve_radial():
    r = mixhess.solve(config("radial_solve.cfg", N=9))
    assert r["values"].shape == (r["coords"].shape[0],)
    assert r["coords"].shape[1] == 4
    assert r["interior_residual"] <= 1e-9
    assert r["estimates"]["all_ok"]
    # The discrete solution is the exact quadratic profile.
    g0 = 1 + math.sqrt(2)
    s = (r["coords"] ** 2).sum(axis=1)
    shift = r["values"] - g0 * s
    assert np.ptp(shift) < 1e-8


def test_continue_epsilon():
    r = mixhess.continue_epsilon(config("radial_continue.cfg", N=9))
    assert r["failure"] is None
    assert r["eps"] == pytest.approx([0.4, 0.2, 0.1, 0.05])
    assert r["c"] == pytest.approx(2 * (1 + math.sqrt(2)), abs=1e-6)


def test_run_command(tmp_path):
    rc, log = mixhess.run("oracle", config("radial_oracle.cfg"), tmp_path)
    assert rc == 0, log
    report = json.loads((tmp_path / "oracle.json").read_text())
    assert report
    rc, log = mixhess.run("solve", config("radial_solve.cfg", N=7), tmp_path / "bad")
    assert rc == 64
    rc, _ = mixhess.run("solve", "[run]\n", tmp_path / "bad")
    assert rc == 64
