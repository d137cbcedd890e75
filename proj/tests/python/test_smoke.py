import itertools
import math

import numpy as np
import pytest

import lovelock


def test_symbols():
    assert lovelock.levi_civita([0, 1, 2]) == 1
    assert lovelock.levi_civita([1, 0, 2]) == -1
    assert lovelock.gkdelta([0, 1], [1, 0]) == -1
    rep = lovelock.verify_eps_delta(4, 2)
    assert rep["passed"] and rep["max_abs_deviation"] == 0


def test_levi_civita_against_inversions():
    for p in itertools.permutations(range(4)):
        inv = sum(1 for i, j in itertools.combinations(range(4), 2) if p[i] > p[j])
        assert lovelock.levi_civita(list(p)) == (-1) ** inv


def test_hodge_matrix_sign_law():
    sig = [-1, 1, 1, 1]
    for k in range(5):
        sq = lovelock.hodge_matrix(4 - k, sig) @ lovelock.hodge_matrix(k, sig)
        sign = (-1) ** (k * (4 - k)) * -1
        assert np.allclose(sq, sign * np.eye(sq.shape[0]), atol=1e-14)


def test_unit_sphere_scalar():
    assert lovelock.metric_at("sphere", point=[1.0, 0.5])["scalar"] == pytest.approx(2.0)


def test_tensor_examples():
    assert np.max(np.abs(lovelock.lovelock_tensor("minkowski", 1, point=[0, 0, 0, 0]))) == 0.0
    a = lovelock.lovelock_tensor("schwarzschild", 1, {"M": "1"}, [0, 10, 1.0, 0.5])
    assert np.max(np.abs(a)) < 1e-8
    z = lovelock.lovelock_tensor("random-poly", 2, {"seed": "4"}, [0.1, 0.2, 0.3, 0.4])
    assert np.max(np.abs(z)) == 0.0


def test_tensor_proportional_to_einstein():
    ratios = []
    for seed in range(1, 6):
        params = {"seed": str(seed)}
        x = [0.1, -0.2, 0.3, 0.0]
        a = lovelock.lovelock_tensor("random-poly", 1, params, x)
        g = lovelock.einstein_tensor("random-poly", params, x)
        c = np.sum(a * g) / np.sum(g * g)
        assert np.max(np.abs(a - c * g)) < 1e-10 * np.max(np.abs(a))
        ratios.append(c)
    assert max(ratios) - min(ratios) < 1e-9 * abs(ratios[0])


def test_density_sphere_product():
    x = [1.1, 0.4, 0.6, 0.2]
    d = lovelock.lovelock_density("sphere-product", 2, {"a": "1", "b": "2"}, x)
    assert d == pytest.approx(32.0 * math.sin(x[0]) * math.sin(x[2]), rel=1e-12)


def test_evaluate_and_errors():
    out = lovelock.evaluate("divergence", "random-poly", {"seed": 2}, 1, [0.1, 0.2, 0.3, 0.4])
    assert out["max_residual"] < 1e-5
    assert 3.5 < out["convergence_ratio"] < 4.5
    with pytest.raises(ValueError):
        lovelock.evaluate("tensor", "schwarzschild", {"M": 1}, 1, [0, 1, 1, 0.5])


def test_suite_report_deterministic():
    a = lovelock.run_suite("hodge", dim=4, seed=5, timing=False)
    b = lovelock.run_suite("hodge", dim=4, seed=5, timing=False)
    assert a == b
    assert a["passed"]
    assert {c["status"] for c in a["checks"]} == {"pass"}
    with pytest.raises(ValueError):
        lovelock.run_suite("jet", dim=9)
