import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmonia.errors import BothZero, ZeroPolynomial
from harmonia.poly import ComplexPoly, DiskDomain, find_roots, poly_derivative, poly_eval, poly_gcd, roots_in_domain

from conftest import ONE, Z, poly

UNIT = DiskDomain(0j, 1.0, 65)


@pytest.mark.parametrize("p, z, expected", [
    (poly(1, 2), 1j, 1 + 2j),
    (poly(0, 0, 1), 1 + 1j, 2j),
    (ComplexPoly(), 0.3 - 2j, 0),
])
def test_eval_examples(p, z, expected):
    assert poly_eval(p, z) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("p, expected", [
    (ComplexPoly.monomial(3), poly(0, 0, 3)),
    (ComplexPoly.constant(5), ComplexPoly()),
    (poly(1, 2, 1), poly(2, 2)),
])
def test_derivative_examples(p, expected):
    assert poly_derivative(p) == expected


def test_canonical_form_trims_trailing_zeros():
    p = poly(1, 2, 0, 0)
    assert p.degree == 1 and p.coeffs[-1] != 0
    assert ComplexPoly().is_zero and ComplexPoly((0, 0)).is_zero


def _close(p, q, tol=1e-9):
    a, b = np.asarray(p.coeffs), np.asarray(q.coeffs)
    return a.shape == b.shape and np.allclose(a, b, atol=tol)


def test_gcd_examples():
    assert _close(poly_gcd(poly(-1, 0, 1), poly(-1, 1)), poly(-1, 1))
    assert _close(poly_gcd(Z, Z + 1), ONE)
    p = ComplexPoly.from_roots([1j, 1j, -2])
    q = ComplexPoly.from_roots([1j, 3])
    assert _close(poly_gcd(p, q), poly(-1j, 1))


def test_gcd_both_zero():
    with pytest.raises(BothZero):
        poly_gcd(ComplexPoly(), ComplexPoly())


def test_gcd_with_zero_is_monic_other():
    assert _close(poly_gcd(ComplexPoly(), poly(2, 4)), poly(0.5, 1))


def test_roots_in_domain_examples():
    got = roots_in_domain(poly(-0.25, 0, 1), UNIT)
    assert sorted((round(z.real, 9), m) for z, m in got) == [(-0.5, 1), (0.5, 1)]
    got = roots_in_domain(ComplexPoly.from_roots([0.5j] * 3), UNIT)
    assert len(got) == 1 and abs(got[0][0] - 0.5j) < 1e-8 and got[0][1] == 3
    assert roots_in_domain(poly(4, 0, 1), UNIT) == []


def test_roots_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        roots_in_domain(ComplexPoly(), UNIT)


def test_product_evaluation_property(rng):
    for _ in range(20):
        p = ComplexPoly(rng.normal(size=rng.integers(1, 10)) + 1j * rng.normal(size=1))
        q = ComplexPoly(rng.normal(size=rng.integers(1, 10)) + 1j * rng.normal(size=1))
        z = rng.normal(size=50) + 1j * rng.normal(size=50)
        lhs = poly_eval(p * q, z)
        rhs = poly_eval(p, z) * poly_eval(q, z)
        assert np.all(np.abs(lhs - rhs) <= 1e-10 * np.maximum(1, np.abs(rhs)))


def test_gcd_divides_inputs(rng):
    for _ in range(30):
        common = rng.uniform(-1, 1, 2) @ [1, 1j] + rng.uniform(-1, 1, size=(2, 2)) @ [1, 1j]
        p = ComplexPoly.from_roots(list(common) + list(rng.normal(size=2) + 3))
        q = ComplexPoly.from_roots(list(common) + list(rng.normal(size=3) - 3))
        g = poly_gcd(p, q)
        for f in (p, q):
            _, rem = divmod(f, g)
            assert rem.norm() < 1e-9 * f.norm()


def test_roots_recovered_with_multiplicity(rng):
    for _ in range(30):
        n_distinct = rng.integers(1, 5)
        while True:
            pts = 0.8 * (rng.uniform(-1, 1, n_distinct) + 1j * rng.uniform(-1, 1, n_distinct)) / np.sqrt(2)
            if n_distinct == 1 or min(abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:]) >= 1e-3:
                break
        mult = rng.integers(1, 3, n_distinct)
        if mult.sum() > 10:
            continue
        p = ComplexPoly.from_roots(np.repeat(pts, mult))
        got = roots_in_domain(p, UNIT)
        assert sorted(m for _, m in got) == sorted(mult.tolist())
        for z, m in got:
            j = int(np.argmin(np.abs(pts - z)))
            assert m == mult[j]
            assert abs(pts[j] - z) < (1e-8 if m == 1 else 1e-6)


def test_find_roots_counts_degree():
    p = ComplexPoly.from_roots([0.1, 0.1, 2, -3j])
    assert sum(m for _, m in find_roots(p)) == 4


def test_order_at():
    p = ComplexPoly.from_roots([0.5] * 3 + [0.2])
    assert p.order_at(0.5) == 3 and p.order_at(0.2) == 1 and p.order_at(0) == 0


def test_domain_grid_strictly_inside():
    d = DiskDomain(0.5 + 0.5j, 2.0, 33)
    Z_, mask = d.grid()
    assert np.all(np.abs(Z_[mask] - d.center) <= 0.999 * d.radius)
    assert Z_.shape == (33, 33)


def test_domain_json_roundtrip():
    d = DiskDomain(0.25 - 1j, 3.0, 17)
    assert DiskDomain.from_json(d.to_json()) == d


@settings(max_examples=50, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=1, max_size=8),
       st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_derivative_matches_finite_difference(coeffs, z):
    p = ComplexPoly(coeffs)
    h = 1e-6
    fd = (p(z + h) - p(z - h)) / (2 * h)
    scale = max(1.0, float(np.sum(np.abs(coeffs))) * 3 ** len(coeffs))
    assert abs(poly_derivative(p)(z) - fd) <= 1e-6 * scale
