import math

import numpy as np
import pytest

from harmonia import fixtures as fx
from harmonia.defect import (HarmonicCertificate, build_defect_config, check_certificate,
                             classical_defect_polynomial, defect_relation_check, dsigma_field,
                             modified_defect_bound, n_window, poincare_field, pseudo_metric_curvature_check,
                             radial_length, schwarz_sup, xi_field, xi_log, PseudoMetricField)
from harmonia.derived import phi_s
from harmonia.errors import ConfigInvalid, DegenerateCurve, HypothesisFailed, InputError
from harmonia.gaussmap import Hyperplane, general_position_check, reduced_representation
from harmonia.nochka import NochkaWeights
from harmonia.poly import ComplexPoly
from harmonia.verify import random_defect_tuple

from conftest import ONE, Z

UNIT = fx.unit_disk()
XI_AT_HALF = 3.73583446e-09


@pytest.mark.parametrize("F, a, delta", [
    ((ONE, Z), [1, 0], 1.0),
    ((ONE, Z), [0, 1], 0.0),
    ((ONE, Z, Z ** 2), [0, 0, 1], 0.0),
    ((ONE, Z, Z ** 2), [1, 0, 0], 1.0),
    ((ONE, Z ** 2, Z ** 4), [0, 1, 0], 0.5),
])
def test_classical_defect_examples(F, a, delta):
    assert classical_defect_polynomial(F, Hyperplane.from_coefficients(a)) == pytest.approx(delta)


def test_defect_relation_example():
    planes = [Hyperplane.from_coefficients(a) for a in ([1, 0], [0, 1], [1, 1])]
    rep = defect_relation_check((ONE, Z), planes)
    assert rep.deltas == pytest.approx([1, 0, 0]) and rep.total == pytest.approx(1)
    assert rep.bound == 2 and rep.holds


def test_defect_relation_random(rng):
    done = 0
    while done < 20:
        k = int(rng.integers(1, 4))
        F = reduced_representation(tuple(fx.random_poly(rng, int(rng.integers(1, 5))) for _ in range(k + 1)))
        q = int(rng.integers(k + 1, 9))
        # coordinate hyperplanes pick out single components, whose lower degrees give positive defects
        planes = [Hyperplane.from_normal(e) for e in np.eye(k + 1)] + fx.random_planes(rng, q - k - 1, k + 1)
        if not general_position_check(planes, k + 1):
            continue
        try:
            rep = defect_relation_check(F, planes)
        except DegenerateCurve:
            continue
        assert rep.holds and rep.total <= k + 1
        done += 1


def test_certificate_examples(line):
    H = Hyperplane.from_coefficients([0, 1])
    good = check_certificate(line.F, H, 0.0, HarmonicCertificate(1.0, Z), UNIT)
    assert good.h1_ok and good.h2_ok and good.accepted
    half = check_certificate(line.F, H, 0.0, HarmonicCertificate(0.5, Z), UNIT)
    assert not half.accepted and not half.h2_ok
    assert half.roots[0].maxima[-1] > half.roots[0].maxima[0]
    omitted = Hyperplane.from_coefficients([1, 0])
    assert check_certificate(line.F, omitted, 0.0, HarmonicCertificate.zero(), UNIT).accepted


def test_certificate_h1_violation():
    H = Hyperplane.from_coefficients([1, 0])
    rep = check_certificate((ONE, Z), H, 0.0, HarmonicCertificate(0.0, hre=ComplexPoly.constant(0.1)), UNIT)
    assert not rep.h1_ok and rep.h1_worst == pytest.approx(0.1)


def test_certificate_singular_away_from_zeros():
    H = Hyperplane.from_coefficients([1, 0])
    rep = check_certificate((ONE, Z), H, 0.0, HarmonicCertificate(1.0, Z - 0.3), UNIT)
    assert not rep.support_ok and not rep.accepted


def test_certificate_negative_eta():
    with pytest.raises(InputError):
        check_certificate((ONE, Z), Hyperplane.from_coefficients([1, 0]), -0.1, HarmonicCertificate.zero(), UNIT)


def test_modified_bound_examples(line):
    H = Hyperplane.from_coefficients([0, 1])
    F = line.F
    assert modified_defect_bound(F, H, [(0.0, HarmonicCertificate(1.0, Z))], UNIT) == 1
    # a positive eta admits a weaker certificate
    mixed = [(0.5, HarmonicCertificate(1.0, Z)), (0.2, HarmonicCertificate(0.5, Z))]
    assert modified_defect_bound(F, H, mixed, UNIT) == pytest.approx(0.5)
    assert modified_defect_bound(F, H, [(0.0, HarmonicCertificate(0.5, Z))], UNIT) == 0.0
    with pytest.raises(InputError):
        modified_defect_bound(F, H, [], UNIT)


def test_certificate_monotone_in_eta(line):
    # |F| >= 1 on the disk for F = (1, z), so raising eta can only help
    H = Hyperplane.from_coefficients([0, 1])
    for c in (1.0, 1.5):
        mu = HarmonicCertificate(c, Z, ComplexPoly((0.0, 0.1)))
        results = [check_certificate(line.F, H, eta, mu, UNIT).accepted for eta in (0.0, 0.3, 1.0, 2.0)]
        first = results.index(True) if True in results else len(results)
        assert all(results[first:])


def test_certificate_json_roundtrip():
    mu = HarmonicCertificate(0.75, ComplexPoly((0.1, 1)), ComplexPoly((0, 2j)))
    back = HarmonicCertificate.from_json(mu.to_json())
    assert back.c == mu.c and back.g == mu.g and back.hre == mu.hre


def test_config_line_fixture(line):
    cfg = line.config
    assert 0 < cfg.tau < 1 and 0 < cfg.divergence_exponent < 4
    assert cfg.N == pytest.approx(17.98611111111111, rel=1e-12)
    assert cfg.Lambda == pytest.approx(1.8864864864864863, rel=1e-12)
    assert cfg.tau == pytest.approx(0.9426934097421205, rel=1e-12)
    assert cfg.kappa == pytest.approx(0.5623100303951367, rel=1e-12)


def _unit_weights(q, n, k):
    return NochkaWeights((1.0,) * q, 1.0, n, k)


def test_config_formulas(rng):
    for _ in range(50):
        q, n, k, eta, w = random_defect_tuple(rng)
        cfg = build_defect_config(q, n, k, eta, w)
        x = 2 * q / cfg.N
        mass = sum(o * (1 - e) for o, e in zip(w.omega, eta))
        assert cfg.Lambda == pytest.approx(mass - (k + 1) - x * (k + 1) ** 2, rel=1e-12)
        assert cfg.tau == pytest.approx((k * (k + 1) / 2 + x * sum(s * s for s in range(k + 1))) / cfg.Lambda)
        assert cfg.kappa == pytest.approx(1 / sum((k - s) + x * (k - s) ** 2 for s in range(k)))
        assert 0 < cfg.tau < 1 and 0 < cfg.N * cfg.Lambda * (1 - cfg.tau) < 4
        assert mass - (k / 2 + 1) * (k + 1) > 0
        S = float(np.sum(1 - np.asarray(eta)))
        assert mass - (k / 2 + 1) * (k + 1) >= (k + 1) / (2 * n - k - 1) * (S - (2 * n - k - 1) * (k / 2 + 1)) - 1e-9


def test_config_hypothesis_fails():
    with pytest.raises(HypothesisFailed):
        build_defect_config(7, 2, 1, [1.0] * 7, _unit_weights(7, 1, 1))


def test_config_hypothesis_arithmetic():
    for n in range(2, 7):
        k = n - 1
        assert (2 * n - k - 1) * (k / 2 + 1) == pytest.approx(n * (n + 1) / 2)


def test_config_invalid_inputs():
    with pytest.raises(ConfigInvalid):
        build_defect_config(7, 2, 1, [0.0] * 6, _unit_weights(7, 1, 1))
    with pytest.raises(ConfigInvalid):
        build_defect_config(7, 2, 2, [0.0] * 7, _unit_weights(7, 1, 2))


def test_n_window_is_open_interval():
    lo, hi = n_window(7, 1, 7.0)
    assert 0 < lo < hi


def test_xi_regression(line):
    val = math.exp(float(xi_log(line.F, line.planes, line.weights, line.config, line.certificates, 0.5)))
    assert val == pytest.approx(XI_AT_HALF, rel=1e-8)


def test_xi_invariant_under_constant_scaling(line):
    z = np.array([0.5, 0.3j, -0.4 + 0.1j])
    u = 2 - 1j
    scaled = tuple(p * u for p in line.F)
    a = xi_log(line.F, line.planes, line.weights, line.config, line.certificates, z)
    b = xi_log(scaled, line.planes, line.weights, line.config, line.certificates, z)
    assert np.allclose(np.exp(a - b), 1, rtol=1e-9)


def test_xi_denominators_positive(line):
    z = UNIT.points()[::9]
    for H in line.planes:
        v = phi_s(line.F, 0, H, z)
        assert np.all(line.config.N - np.log(v[v > 0]) > 0)


def test_area_density_vanishes_at_zero(line):
    field = xi_field(line.F, line.planes, line.weights, line.config, line.certificates, UNIT)
    # the certificate cancels the zero, so only the log denominators pull the density down
    radii = 10.0 ** -np.array([2, 5, 10, 50, 100])
    vals = [float(field.density(np.array([r * np.exp(0.4j)]))[0]) for r in radii]
    assert all(b < a for a, b in zip(vals, vals[1:])) and vals[-1] < 0.05 * vals[0]
    assert float(field.density(np.array([0j]))[0]) == 0


def test_xi_curvature_check(line):
    field = xi_field(line.F, line.planes, line.weights, line.config, line.certificates, UNIT)
    check = pseudo_metric_curvature_check(field)
    assert check.c_positive and check.c_stable and check.sup_stable
    assert check.c == pytest.approx(4.658e8, rel=1e-3)


def test_poincare_equality_case():
    check = pseudo_metric_curvature_check(poincare_field(UNIT))
    assert check.sup == pytest.approx(1, abs=1e-6) and check.sup_refined == pytest.approx(1, abs=1e-6)
    assert check.c == pytest.approx(0.5, rel=1e-5)


def test_scaled_poincare_ratio_four():
    field = poincare_field(UNIT).scaled(2)
    assert schwarz_sup(field, UNIT) == pytest.approx(4, abs=1e-6)


def test_radial_length_flat():
    flat = PseudoMetricField(lambda z: np.zeros(np.shape(z)), UNIT, "length")
    r = radial_length(flat, 0.3)
    assert not r.divergent and r.value == pytest.approx(1, abs=1e-9)


def test_radial_length_exponent_fixture(line):
    ex = line.config.divergence_exponent
    assert 0 < ex < 4
    field = PseudoMetricField(lambda z: -4 / ex * np.log(np.abs(z - 0.5)), UNIT, "length", singular_points=(0.5,))
    r = radial_length(field, 0.0)
    assert r.divergent and r.exponent == pytest.approx(-4 / ex, rel=1e-3)


def test_dsigma_finite_for_omitted_family():
    f = fx.line_fixture(all_omitted=True)
    field = dsigma_field(f.F, f.planes, f.weights, f.config, f.certificates, f.domain)
    r = radial_length(field, 0.0)
    assert not r.divergent and 0 < r.value < 1e9
    assert r.value == pytest.approx(0.003608014929643559, rel=1e-6)


def test_dsigma_diverges_through_certified_zero(line):
    field = dsigma_field(line.F, line.planes, line.weights, line.config, line.certificates, UNIT)
    r = radial_length(field, 0.0)
    assert r.divergent and r.exponent <= -1
