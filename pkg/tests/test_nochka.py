import json
from itertools import combinations

import numpy as np
import pytest

from harmonia import fixtures as fx
from harmonia.errors import ConfigInvalid, NotSubgeneralPosition, TooFewPlanes
from harmonia.gaussmap import Hyperplane
from harmonia.nochka import (NochkaWeights, compute_nochka_weights, divisor_inequality_check, is_subgeneral,
                             product_inequality_check, span_dim, verify_nochka_properties)

from conftest import ONE, Z

UNIT = fx.unit_disk()


def test_general_position_gives_unit_weights(rng):
    for q in (5, 6, 8):
        planes = fx.random_planes(rng, q, 3)
        w = compute_nochka_weights(planes, 2)
        assert np.allclose(w.omega, 1, atol=1e-9) and w.theta == pytest.approx(1, abs=1e-9)
        assert verify_nochka_properties(w, planes).passed


def test_k1_n2_restricted_planes(rng):
    planes = fx.restricted_planes(rng, 6, 3, 2)
    assert is_subgeneral(planes, 2)
    w = compute_nochka_weights(planes, 2)
    assert (w.n, w.k, w.q) == (2, 1, 6)
    rep = verify_nochka_properties(w, planes)
    assert rep.passed, rep.failures()
    assert (2 + 1) / 2 - 1e-9 <= w.theta <= (4 - 1 + 1) / 2 + 1e-9


def test_degenerate_line_configuration():
    # three normals on one line of C^3 (a 2-subgeneral but not general family)
    normals = [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 2, 3]]
    planes = [Hyperplane.from_normal(v) for v in normals]
    w = compute_nochka_weights(planes, 3)
    rep = verify_nochka_properties(w, planes)
    assert rep.passed, rep.failures()
    assert sum(w.omega[:3]) <= 2 + 1e-9


def test_too_few_planes(rng):
    with pytest.raises(TooFewPlanes):
        compute_nochka_weights(fx.random_planes(rng, 3, 3), 2)


def test_not_subgeneral():
    planes = [Hyperplane.from_normal([1, 0])] * 3 + [Hyperplane.from_normal([0, 1])] * 3
    with pytest.raises(NotSubgeneralPosition):
        compute_nochka_weights(planes, 2)


def test_checker_examples(rng):
    planes = fx.random_planes(rng, 5, 3)
    unit = NochkaWeights((1.0,) * 5, 1.0, 2, 2)
    assert verify_nochka_properties(unit, planes).passed
    dup = planes[:4] + [planes[0]]
    rep = verify_nochka_properties(unit, dup)
    assert not rep.bullets["subset_bound"] and rep.violations
    skewed = NochkaWeights((1.0, 1.0, 1.0, 1.0, 0.5), 1.0, 2, 2)
    rep = verify_nochka_properties(skewed, planes)
    assert not rep.bullets["sum_identity"]


def test_checker_rejects_wrong_length(rng):
    with pytest.raises(ConfigInvalid):
        verify_nochka_properties(NochkaWeights((1.0,) * 3, 1.0, 2, 2), fx.random_planes(rng, 5, 3))


def test_weights_json_roundtrip(rng):
    w = compute_nochka_weights(fx.restricted_planes(rng, 6, 3, 2), 2)
    back = NochkaWeights.from_json(json.loads(json.dumps(w.to_json())))
    assert back == w


def test_weights_json_invalid():
    with pytest.raises(ConfigInvalid):
        NochkaWeights.from_json({"omega": [1, 1], "theta": "x"})


def test_self_consistency_many(rng):
    for _ in range(20):
        q = int(rng.integers(6, 10))
        planes = fx.restricted_planes(rng, q, 3, 2)
        assert verify_nochka_properties(compute_nochka_weights(planes, 2), planes).passed


def test_product_inequality_examples(rng):
    planes = fx.random_planes(rng, 5, 3)
    w = NochkaWeights((1.0,) * 5, 1.0, 2, 2)
    E = rng.uniform(1.5, 9, 5)
    wit = product_inequality_check(w, planes, E, (0, 1, 2))
    assert wit.basis == (0, 1, 2) and wit.margin == pytest.approx(0, abs=1e-12)
    planes = fx.restricted_planes(rng, 6, 3, 2)
    w = compute_nochka_weights(planes, 2)
    for B in combinations(range(6), 3):
        wit = product_inequality_check(w, planes, np.full(6, np.e), B)
        assert sum(w.omega[j] for j in B) <= len(wit.basis) + 1e-9


def test_product_inequality_random_trials(rng):
    planes = fx.restricted_planes(rng, 6, 3, 2)
    w = compute_nochka_weights(planes, 2)
    for _ in range(100):
        E = rng.uniform(1, 10, 6) + 1e-9
        B = rng.choice(6, size=int(rng.integers(1, 4)), replace=False)
        assert product_inequality_check(w, planes, E, B).margin >= -1e-12


def test_divisor_simple_zeros(rng):
    F = (ONE, Z, Z ** 2)
    planes = fx.random_planes(rng, 5, 3)
    w = compute_nochka_weights(planes, 2)
    rep = divisor_inequality_check(F, planes, w, UNIT)
    assert rep.passed
    assert all(p.order_wronskian == 0 for p in rep.points)


def test_divisor_triple_zero():
    F = (ONE, Z, Z ** 3)
    rng = np.random.default_rng(3)
    planes = [Hyperplane.from_normal([0, 0, 1])] + fx.random_planes(rng, 4, 3)
    w = compute_nochka_weights(planes, 2)
    rep = divisor_inequality_check(F, planes, w, UNIT)
    at0 = [p for p in rep.points if abs(p.z) < 1e-9]
    assert at0 and at0[0].order_wronskian == 1 and at0[0].orders[0] == 3
    assert at0[0].margin == pytest.approx(1 - w.omega[0], abs=1e-9)
    assert rep.passed


def test_divisor_no_roots_vacuous():
    planes = [Hyperplane.from_coefficients([2 * np.exp(2j * np.pi * j / 4), -1]) for j in range(4)]
    w = compute_nochka_weights(planes, 1)
    rep = divisor_inequality_check((ONE, Z), planes, w, UNIT)
    assert rep.points == [] and rep.passed


def test_span_dim():
    A = np.array([[1, 0], [2, 0], [0, 1]], dtype=complex)
    assert span_dim(A, (0, 1)) == 1 and span_dim(A, (0, 2)) == 2
