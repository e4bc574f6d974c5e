import numpy as np
import pytest

from harmonia import fixtures as fx
from harmonia.errors import DegeneratePoint, DimensionMismatch, NotQuasiconformal
from harmonia.poly import ComplexPoly
from harmonia.surface import (HarmonicImmersion, conformal_curvature_fd, curvature_domination_slack,
                              curvature_induced, curvature_klotz, curvature_ratio_bound_check, lagrange_residual,
                              metric_sample, metric_sandwich_check, qc_constant, qc_inequality_holds, unit_normal)

from conftest import Z


def random_surface(rng, dim=3, degree=5, resolution=33):
    phi = tuple(ComplexPoly(rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)) for _ in range(dim))
    return HarmonicImmersion(phi, fx.unit_disk(resolution))


def near_conformal_surface(rng, degree=3, size=0.08, resolution=33):
    """Flat plane plus a small random perturbation, so K stays finite."""
    base = (0.5, -0.5j, 0)
    phi = tuple(ComplexPoly(np.r_[c, np.zeros(degree)] + size * (rng.normal(size=degree + 1)
                                                                 + 1j * rng.normal(size=degree + 1)))
                for c in base)
    return HarmonicImmersion(phi, fx.unit_disk(resolution))


def test_graph_metric_sample(graph):
    z = np.array([0, 0.3 + 0.4j, -0.7j])
    m = metric_sample(graph, z)
    assert np.allclose(m.h, z ** 2, atol=1e-15)
    assert np.allclose(m.phi_norm_sq, 0.5 + np.abs(z) ** 2)


def test_enneper_metric_sample(enneper):
    z = np.array([0.1, 0.5j, -0.3 + 0.2j])
    m = metric_sample(enneper, z)
    assert np.allclose(m.h, 0, atol=1e-15)
    assert np.allclose(m.phi_norm_sq, (1 + np.abs(z) ** 2) ** 2 / 2)


def test_flat_metric_sample(flat):
    m = metric_sample(flat, 0.2)
    assert (float(m.E), float(m.F), float(m.G)) == pytest.approx((1, 0, 1), abs=1e-15)
    assert float(m.jacobian) == pytest.approx(1)
    assert float(m.grad_norm_sq) == pytest.approx(2)


def test_metric_identities_on_random_surfaces(rng):
    for _ in range(5):
        s = random_surface(rng)
        z = s.domain.points()
        m = metric_sample(s, z)
        scale = m.phi_norm_sq ** 2
        assert np.allclose(m.E + m.G, 4 * m.phi_norm_sq, rtol=1e-10)
        assert np.all(np.abs(m.E * m.G - m.F ** 2 - 4 * (m.phi_norm_sq ** 2 - np.abs(m.h) ** 2)) <= 1e-10 * 16 * scale)
        assert np.all(np.abs(m.h) < m.phi_norm_sq)


def test_degenerate_point_rejected():
    s = HarmonicImmersion((Z, Z * 1j, ComplexPoly()), fx.unit_disk(9))
    with pytest.raises(DegeneratePoint):
        metric_sample(s, 0)


@pytest.mark.parametrize("surface, z, expected", [
    ("flat", 0.4j, (0, 0, 1)),
    ("graph", 0, (0, 0, 1)),
    ("enneper", 0, (0, 0, -1)),
])
def test_unit_normal_examples(surface, z, expected, request):
    assert np.allclose(unit_normal(request.getfixturevalue(surface), z), expected, atol=1e-14)


def test_unit_normal_requires_three_dimensions(rng):
    with pytest.raises(DimensionMismatch):
        unit_normal(random_surface(rng, dim=4), 0.1)


def test_unit_normal_matches_tangent_cross_product(graph):
    z = np.array([0.3 + 0.1j, -0.5j])
    n = unit_normal(graph, z)
    eps = 1e-6
    x = lambda w: graph.position(w)
    xu = (x(z + eps) - x(z - eps)) / (2 * eps)
    xv = (x(z + 1j * eps) - x(z - 1j * eps)) / (2 * eps)
    c = np.cross(xu.T, xv.T).T
    assert np.allclose(n, c / np.linalg.norm(c, axis=0), atol=1e-8)


def test_curvature_examples(graph, enneper, flat):
    assert float(curvature_klotz(graph, 0)) == pytest.approx(-4, abs=1e-12)
    assert float(curvature_induced(graph, 0)) == pytest.approx(-4, abs=1e-12)
    assert float(curvature_induced(graph, 1.0)) == pytest.approx(-0.16, abs=1e-12)
    z = np.array([0.2, 0.5j, 0.6 - 0.3j])
    assert np.allclose(curvature_klotz(enneper, z), -4 / (1 + np.abs(z) ** 2) ** 4, atol=1e-12)
    assert float(curvature_klotz(flat, 0.3)) == 0 and float(curvature_induced(flat, 0.3)) == 0


def test_lagrange_identity_random(rng):
    for _ in range(5):
        s = random_surface(rng)
        z = s.domain.points()
        v, dv = s.phi_at(z), s.dphi_at(z)
        scale = np.sum(np.abs(v) ** 2, axis=0) * np.sum(np.abs(dv) ** 2, axis=0)
        assert np.all(lagrange_residual(s, z) <= 1e-12 * scale)


def test_curvatures_nonpositive(rng):
    for _ in range(5):
        s = random_surface(rng)
        z = s.domain.points()
        assert np.all(curvature_klotz(s, z) <= 0) and np.all(curvature_induced(s, z) <= 0)


def test_klotz_curvature_matches_finite_differences(graph, enneper):
    for s in (graph, enneper):
        z = s.domain.points()[::7]
        exact = curvature_klotz(s, z)
        assert np.max(np.abs(conformal_curvature_fd(s, z) - exact)) < 1e-4


def test_qc_constant_examples(graph, enneper, flat):
    assert qc_constant(graph) == pytest.approx(np.sqrt(5), abs=1e-9)
    assert qc_constant(enneper) == 1.0
    assert qc_constant(flat) == 1.0


def test_qc_constant_infinite():
    s = HarmonicImmersion((ComplexPoly.constant(1), ComplexPoly(), ComplexPoly()), fx.unit_disk(9))
    with pytest.raises(NotQuasiconformal):
        qc_constant(s)


def test_gradient_and_phi_forms_agree(rng):
    for _ in range(5):
        s = near_conformal_surface(rng)
        z = s.domain.points()
        for K in (1.0, 1.5, 3.0, qc_constant(s)):
            a, b = qc_inequality_holds(s, z, K)
            assert np.array_equal(a, b)
        assert np.all(qc_inequality_holds(s, z, qc_constant(s))[0])


@pytest.mark.parametrize("z", [0.3 + 0.4j, 0.5j])
def test_lagrange_residual_examples(graph, enneper, z):
    assert float(lagrange_residual(graph, z)) < 1e-12
    assert float(lagrange_residual(enneper, z)) < 1e-12


def test_lagrange_constant_phi(flat):
    assert float(lagrange_residual(flat, 0.7)) == 0


def test_curvature_ratio_examples(graph, enneper):
    rep = curvature_ratio_bound_check(graph, points=np.array([1.0, 1j, -1.0]))
    assert rep.bound == pytest.approx(25 / 81, abs=1e-12)
    assert rep.min_ratio == pytest.approx(25 / 27, abs=1e-9) and rep.holds
    rep = curvature_ratio_bound_check(enneper)
    assert rep.min_ratio == pytest.approx(1, abs=1e-9) and rep.holds
    assert curvature_ratio_bound_check(graph, points=np.array([0j])).min_ratio == pytest.approx(1)


def test_ratio_skips_flat_points(flat):
    rep = curvature_ratio_bound_check(flat)
    assert rep.checked == 0 and rep.skipped > 0 and rep.holds


def test_sandwich_and_top_eigenvalue(graph, enneper, rng):
    for s in (graph, enneper, near_conformal_surface(rng)):
        assert metric_sandwich_check(s).holds


def test_domination_slack(graph, enneper):
    for s in (graph, enneper):
        assert curvature_domination_slack(s, qc_constant(s)) >= -1e-9


def test_surface_json_roundtrip(graph):
    assert HarmonicImmersion.from_json(graph.to_json()).phi == graph.phi
