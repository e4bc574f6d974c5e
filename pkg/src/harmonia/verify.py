"""Seeded property suites, one per module, shared by the CLI and the tests."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import unitary_group

from . import fixtures as fx
from .defect import (HarmonicCertificate, build_defect_config, check_certificate, n_window,
                     xi_log)
from .derived import DerivedCurve, nondegeneracy_rank, wronskian
from .errors import HarmoniaError
from .gaussmap import (Direction, Hyperplane, angle_sandwich_check, hyperplane_distance, omits_hyperplane,
                       pairing_poly, reduced_representation)
from .geodesy import discretize_metric, distance_to_boundary, metric_comparison_check
from .nochka import (NochkaWeights, compute_nochka_weights, divisor_inequality_check,
                     product_inequality_check, verify_nochka_properties)
from .poly import ComplexPoly, DiskDomain, find_roots, poly_gcd
from .surface import (HarmonicImmersion, conformal_curvature_fd, curvature_domination_slack, curvature_klotz,
                      hopf, lagrange_residual, metric_sample, metric_sandwich_check, phi_norm_sq, qc_constant,
                      qc_inequality_holds)


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""


Suite = Callable[..., list]


def _rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def core_suite(rng: np.random.Generator, **_) -> list[Check]:
    out = []
    z = rng.uniform(-1, 1, 1000) + 1j * rng.uniform(-1, 1, 1000)
    worst = 0.0
    for _ in range(20):
        p, q = fx.random_poly(rng, rng.integers(0, 9)), fx.random_poly(rng, rng.integers(0, 9))
        worst = max(worst, _rel((p * q)(z), p(z) * q(z)))
    out.append(Check("core", "product evaluation", worst < 1e-10, f"max rel err {worst:.2e}"))

    worst = 0.0
    for _ in range(20):
        common = ComplexPoly.from_roots(rng.normal(size=2) + 1j * rng.normal(size=2))
        p = common * fx.random_poly(rng, 3)
        q = common * fx.random_poly(rng, 2)
        g = poly_gcd(p, q)
        scale = max(p.norm(), q.norm())
        worst = max(worst, (p % g).norm() / scale, (q % g).norm() / scale)
    out.append(Check("core", "gcd divides both inputs", worst < 1e-9, f"max remainder {worst:.2e}"))

    bad, err = 0, 0.0
    for _ in range(100):
        m = int(rng.integers(1, 6))
        roots = []
        while len(roots) < m:
            r = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            if all(abs(r - s) >= 1e-3 for s in roots):
                roots.append(r)
        mult = rng.integers(1, 3, size=m)
        while mult.sum() > 10:
            mult[np.argmax(mult)] -= 1
        p = ComplexPoly.from_roots([r for r, k in zip(roots, mult) for _ in range(k)])
        found = find_roots(p)
        for r, k in zip(roots, mult):
            match = [(abs(z0 - r), m0) for z0, m0 in found if abs(z0 - r) < 1e-4]
            if len(match) != 1 or match[0][1] != k:
                bad += 1
            else:
                err = max(err, match[0][0])
    out.append(Check("core", "root recovery", bad == 0 and err < 1e-8, f"{bad} misses, max err {err:.2e}"))
    return out


def _random_surface(rng, deg=5, res=17) -> HarmonicImmersion:
    return HarmonicImmersion(tuple(fx.random_poly(rng, deg) for _ in range(3)), fx.unit_disk(res))


def surface_suite(rng: np.random.Generator, **_) -> list[Check]:
    out = []
    worst_id = worst_lagrange = 0.0
    hopf_ok = True
    for _ in range(10):
        s = _random_surface(rng)
        z = s.domain.points()
        m = metric_sample(s, z)
        nsq = phi_norm_sq(s, z)
        worst_id = max(worst_id, _rel(m.E + m.G, 4 * nsq),
                       _rel(m.E * m.G - m.F ** 2, 4 * (nsq ** 2 - np.abs(m.h) ** 2)))
        hopf_ok &= bool(np.all(np.abs(hopf(s, z)) <= nsq))
        scale = nsq * np.sum(np.abs(s.dphi_at(z)) ** 2, axis=0)
        worst_lagrange = max(worst_lagrange, float(np.max(lagrange_residual(s, z) / scale)))
    out.append(Check("surface", "trace and determinant identities", worst_id < 1e-10, f"{worst_id:.2e}"))
    out.append(Check("surface", "|h| <= |phi|^2", hopf_ok))
    out.append(Check("surface", "complex Lagrange identity", worst_lagrange < 1e-12, f"{worst_lagrange:.2e}"))

    for name, s in (("graph", fx.harmonic_graph(33)), ("enneper", fx.enneper(33))):
        K = qc_constant(s)
        z = s.domain.points()
        grad_form, phi_form = qc_inequality_holds(s, z, K)
        out.append(Check("surface", f"{name}: QC criteria agree", bool(np.all(grad_form == phi_form)
                                                                         and np.all(grad_form))))
        sw = metric_sandwich_check(s, K)
        out.append(Check("surface", f"{name}: metric sandwich", sw.holds,
                         f"margins {sw.lower_margin:.2e} {sw.upper_margin:.2e} {sw.top_eig_margin:.2e}"))
        fd = conformal_curvature_fd(s, z)
        an = curvature_klotz(s, z)
        err = float(np.max(np.abs(fd - an)))
        out.append(Check("surface", f"{name}: conformal curvature by finite differences", err < 1e-4, f"{err:.2e}"))
        slack = curvature_domination_slack(s, K)
        out.append(Check("surface", f"{name}: curvature domination", slack >= -1e-9, f"{slack:.2e}"))
    return out


def gaussmap_suite(rng: np.random.Generator, **_) -> list[Check]:
    out = []
    s = fx.enneper(17)
    zs = (rng.uniform(-0.7, 0.7, 100) + 1j * rng.uniform(-0.7, 0.7, 100))
    worst = 0.0
    for z in zs:
        b = Direction.normalized(rng.normal(size=3))
        sw = angle_sandwich_check(s, 1.0, z, b)
        worst = max(worst, sw.equality_error, float(np.max(np.abs(sw.upper - sw.middle))))
    out.append(Check("gaussmap", "conformal equality case", worst < 1e-10, f"{worst:.2e}"))

    d = fx.unit_disk(17)
    agree = True
    for _ in range(10):
        F = (fx.random_poly(rng, 2), fx.random_poly(rng, 2))
        H = Hyperplane.from_normal(fx.random_unit(rng, 2))
        roots = [r for r, _ in find_roots(pairing_poly(F, H)) if d.contains(r)]
        agree &= omits_hyperplane(F, H, d) == (not roots)
        for r in roots:
            ring = r + 1e-6 * np.exp(2j * np.pi * np.arange(8) / 8)
            agree &= float(np.min(hyperplane_distance(F, H, ring))) < 1e-4
    out.append(Check("gaussmap", "omission agrees with distance", bool(agree)))

    ok = True
    for _ in range(10):
        common = ComplexPoly.from_roots(rng.normal(size=2) + 1j * rng.normal(size=2))
        F = tuple(common * fx.random_poly(rng, 2) for _ in range(3))
        red = reduced_representation(F)
        g = red[0]
        for p in red[1:]:
            g = poly_gcd(g, p)
        ok &= g.degree == 0
        H = Hyperplane.from_normal(fx.random_unit(rng, 3))
        zz = rng.normal(size=5) + 1j * rng.normal(size=5)
        scaled = reduced_representation(tuple(p.scale(2 + 1j) for p in F))
        ok &= _rel(hyperplane_distance(scaled, H, zz), hyperplane_distance(red, H, zz)) < 1e-9
    out.append(Check("gaussmap", "reduction is coprime and scale invariant", bool(ok)))
    return out


def derived_suite(rng: np.random.Generator, **_) -> list[Check]:
    out = []
    worst_u, spread, phi_max, w_ok = 0.0, 0.0, 0.0, True
    for _ in range(8):
        k = int(rng.integers(1, 4))
        F = tuple(fx.random_poly(rng, int(rng.integers(k, 7))) for _ in range(k + 1))
        if nondegeneracy_rank(F) != k:
            continue
        w_ok &= not wronskian(F).is_zero
        U = unitary_group.rvs(k + 1, random_state=rng)
        G = tuple(sum((ComplexPoly.constant(U[i, j]) * F[j] for j in range(k + 1)), ComplexPoly())
                  for i in range(k + 1))
        dc, dg = DerivedCurve(F), DerivedCurve(G)
        z = 0.8 * (rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1, 1, 20))
        for s in range(k + 1):
            worst_u = max(worst_u, _rel(dg.norm_sq(s, z), dc.norm_sq(s, z)))
        top = [dc.contracted_norm_sq(k, Hyperplane.from_normal(fx.random_unit(rng, k + 1)), z) for _ in range(20)]
        spread = max(spread, _rel(np.max(top, axis=0), np.min(top, axis=0)))
        for s in range(k + 1):
            H = Hyperplane.from_normal(fx.random_unit(rng, k + 1))
            phi_max = max(phi_max, float(np.max(dc.phi_s(s, H, z))))
    out.append(Check("derived", "unitary invariance", worst_u < 1e-9, f"{worst_u:.2e}"))
    out.append(Check("derived", "top Wronskian nonzero", bool(w_ok)))
    out.append(Check("derived", "top contracted norm ignores H", spread < 1e-12, f"{spread:.2e}"))
    out.append(Check("derived", "distances bounded by 1", phi_max <= 1 + 1e-10, f"max {phi_max:.12f}"))
    return out


def nochka_suite(rng: np.random.Generator, weights: NochkaWeights | None = None,
                 planes: list[Hyperplane] | None = None, **_) -> list[Check]:
    out = []
    if weights is not None and planes is not None:
        rep = verify_nochka_properties(weights, planes)
        for name, ok in rep.bullets.items():
            out.append(Check("nochka", f"supplied weights: {name}", ok))
        return out

    consistent, unit = True, True
    for _ in range(10):
        k = int(rng.integers(1, 4))
        n = int(rng.integers(k, k + 3))
        q = 2 * n - k + 2 + int(rng.integers(0, 3))
        pl = fx.restricted_planes(rng, q, n + 1, k + 1)
        w = compute_nochka_weights(pl, n)
        consistent &= verify_nochka_properties(w, pl).passed
        g = fx.random_planes(rng, k + 3, k + 1)
        wg = compute_nochka_weights(g, k)
        unit &= bool(np.allclose(wg.omega, 1, atol=1e-9) and abs(wg.theta - 1) <= 1e-9)
    out.append(Check("nochka", "computed weights verify", bool(consistent)))
    out.append(Check("nochka", "general position gives unit weights", bool(unit)))

    pl = fx.restricted_planes(rng, 6, 3, 2)
    w = compute_nochka_weights(pl, 2)
    found = 0
    for _ in range(100):
        E = rng.uniform(1.0001, 10, 6)
        size = int(rng.integers(1, 4))
        B = rng.choice(6, size=size, replace=False)
        try:
            product_inequality_check(w, pl, E, B)
            found += 1
        except HarmoniaError:
            pass
    out.append(Check("nochka", "product inequality witnesses", found == 100, f"{found}/100"))

    passed = 0
    for _ in range(20):
        k = int(rng.integers(1, 4))
        F = tuple(fx.random_poly(rng, int(rng.integers(k, 6))) for _ in range(k + 1))
        if nondegeneracy_rank(F) != k:
            passed += 1
            continue
        n = k + int(rng.integers(0, 2))
        q = min(9, 2 * n - k + 2 + int(rng.integers(0, 2)))
        pl = fx.restricted_planes(rng, q, n + 1, k + 1)
        passed += divisor_inequality_check(F, pl, compute_nochka_weights(pl, n), DiskDomain(0, 2.0, 8)).passed
    out.append(Check("nochka", "divisor inequality", passed == 20, f"{passed}/20"))
    return out


def random_defect_tuple(rng: np.random.Generator):
    """(q, n, k, eta, weights) meeting the defect-sum hypothesis."""
    while True:
        n = int(rng.integers(2, 5))
        k = int(rng.integers(1, n))
        need = (2 * n - k - 1) * (k / 2 + 1)
        q = int(np.floor(need)) + 1 + int(rng.integers(0, 4))
        if q > 12:
            continue
        eta = rng.uniform(0, 1, q) * rng.uniform(0, 1)
        if np.sum(1 - eta) <= need:
            continue
        pl = fx.restricted_planes(rng, q, n, k + 1)
        return q, n, k, eta, compute_nochka_weights(pl, n - 1)


def defect_suite(rng: np.random.Generator, **_) -> list[Check]:
    out = []
    windows, chain, lower = True, True, True
    for _ in range(20):
        q, n, k, eta, w = random_defect_tuple(rng)
        cfg = build_defect_config(q, n, k, eta, w)
        windows &= 0 < cfg.tau < 1 and 0 < cfg.divergence_exponent < 4
        lo, hi = n_window(q, k, cfg.weighted_mass)
        windows &= lo < cfg.ratio < hi
        mass = cfg.weighted_mass
        S = float(np.sum(1 - eta))
        chain &= mass - (k / 2 + 1) * (k + 1) >= (k + 1) / (2 * n - k - 1) * (S - (2 * n - k - 1) * (k / 2 + 1)) - 1e-9
        lower &= mass - (k + 1) >= (q - 2 * (n - 1) + k - 1 - float(np.sum(eta))) * (k + 1) / (2 * (n - 1) - k + 1) - 1e-9
    out.append(Check("defect", "window invariants", bool(windows)))
    out.append(Check("defect", "weighted mass chain", bool(chain)))
    out.append(Check("defect", "weighted mass lower bound", bool(lower)))

    f = fx.line_fixture(33)
    z = np.array([0.5, 0.3 + 0.4j, -0.6j])
    base = xi_log(f.F, f.planes, f.weights, f.config, f.certificates, z)
    u = 2 - 1j
    scaled = xi_log(tuple(p.scale(u) for p in f.F), f.planes, f.weights, f.config, f.certificates, z)
    err = float(np.max(np.abs(np.exp(scaled - base) - 1)))
    out.append(Check("defect", "xi homogeneity (eta = 0)", err < 1e-9, f"{err:.2e}"))

    mono = True
    # |F| >= 1 on the disk, so larger eta can only relax the grid test
    F = f.F
    H = f.planes[0]
    d = f.domain
    for c in (0.5, 1.0, 1.5):
        mu = HarmonicCertificate(c, fx.Z)
        prev = False
        for eta in (0.0, 0.25, 0.5, 1.0):
            acc = check_certificate(F, H, eta, mu, d).accepted
            mono &= acc or not prev
            prev = acc
    out.append(Check("defect", "certificate acceptance monotone in eta", bool(mono)))
    return out


def geodesy_suite(rng: np.random.Generator, **_) -> list[Check]:
    out = []
    flat = fx.flat_plane(512)
    d0 = distance_to_boundary(discretize_metric(flat, "klotz"), 0)
    out.append(Check("geodesy", "flat disk distance at 512", abs(d0 - 1) <= 0.03, f"{d0:.5f}"))

    surf = fx.harmonic_graph
    probes = [0, 0.5, 0.3 + 0.4j, -0.2 - 0.6j]
    mono = True
    prev = None
    for res in (33, 65, 129):
        g = discretize_metric(surf(res), "induced")
        cur = np.array([distance_to_boundary(g, p) for p in probes])
        if prev is not None:
            mono &= bool(np.all(cur <= prev * 1.005))
        prev = cur
    out.append(Check("geodesy", "refinement decreases distances", bool(mono)))

    for name, s in (("graph", fx.harmonic_graph(65)), ("enneper", fx.enneper(65))):
        rep = metric_comparison_check(s, seed=int(rng.integers(0, 2**31)))
        out.append(Check("geodesy", f"{name}: d <= sqrt2 d_Gamma", rep.holds, f"{rep.distance_margin:.3e}"))
    s = fx.enneper(65)
    gap = np.max(np.abs(discretize_metric(s, "induced").distances - discretize_metric(s, "klotz").distances))
    out.append(Check("geodesy", "conformal case distances agree", bool(gap < 1e-9), f"{gap:.2e}"))
    return out


SUITES: dict[str, Suite] = {
    "core": core_suite,
    "surface": surface_suite,
    "gaussmap": gaussmap_suite,
    "derived": derived_suite,
    "nochka": nochka_suite,
    "defect": defect_suite,
    "geodesy": geodesy_suite,
}


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("HARMONIA_THREADS", "1")))
    except ValueError:
        return 1


def run_suites(names=None, seed: int = 42, **extra) -> list[Check]:
    """Run the selected suites; each gets its own generator derived from ``seed``."""
    names = list(names or SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    seeds = np.random.SeedSequence(seed).spawn(len(SUITES))
    by_name = dict(zip(SUITES, seeds))

    def run(name):
        try:
            return SUITES[name](np.random.default_rng(by_name[name]), **extra)
        except HarmoniaError as exc:
            return [Check(name, "suite raised", False, f"{type(exc).__name__}: {exc}")]

    with ThreadPoolExecutor(max_workers=thread_cap()) as pool:
        results = list(pool.map(run, names))
    return [c for group in results for c in group]
