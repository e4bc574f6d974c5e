"""Canonical surfaces, hyperplane families and random generators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .defect import DefectConfig, HarmonicCertificate, build_defect_config
from .gaussmap import Direction, Hyperplane
from .nochka import NochkaWeights, compute_nochka_weights
from .poly import ComplexPoly, DiskDomain
from .surface import HarmonicImmersion

Z = ComplexPoly.monomial(1)
ONE = ComplexPoly.constant(1)


def unit_disk(resolution: int = 65) -> DiskDomain:
    return DiskDomain(0j, 1.0, resolution)


def harmonic_graph(resolution: int = 65) -> HarmonicImmersion:
    """The graph of x^2 - y^2 over the unit disk; K = sqrt(5) on the closed disk."""
    return HarmonicImmersion((ComplexPoly.constant(0.5), ComplexPoly.constant(-0.5j), Z), unit_disk(resolution))


def enneper(resolution: int = 65) -> HarmonicImmersion:
    return HarmonicImmersion(
        (ComplexPoly((0.5, 0, -0.5)), ComplexPoly((0.5j, 0, 0.5j)), Z), unit_disk(resolution))


def flat_plane(resolution: int = 65) -> HarmonicImmersion:
    return HarmonicImmersion((ComplexPoly.constant(0.5), ComplexPoly.constant(-0.5j), ComplexPoly()),
                             unit_disk(resolution))


def seven_directions() -> list[Direction]:
    """Seven directions, no three coplanar, all avoided by the normal of the harmonic graph."""
    alpha = 2 * np.pi * np.arange(7) / 7
    beta = np.array([0.3, -0.3, 0.25, -0.25, 0.2, -0.2, 0.1])
    return [Direction.normalized([np.cos(a) * np.cos(b), np.sin(a) * np.cos(b), np.sin(b)])
            for a, b in zip(alpha, beta)]


def random_poly(rng: np.random.Generator, degree: int) -> ComplexPoly:
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return ComplexPoly(c)


def random_unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_planes(rng: np.random.Generator, q: int, dim: int) -> list[Hyperplane]:
    return [Hyperplane.from_normal(random_unit(rng, dim)) for _ in range(q)]


def restricted_planes(rng: np.random.Generator, q: int, ambient: int, dim: int) -> list[Hyperplane]:
    """Generic hyperplanes of C^ambient cut down to a generic dim-dimensional subspace.

    The result is in (ambient - 1)-subgeneral position inside C^dim.
    """
    C = rng.normal(size=(ambient, dim)) + 1j * rng.normal(size=(ambient, dim))
    return [Hyperplane.from_normal(C.conj().T @ random_unit(rng, ambient)) for _ in range(q)]


@dataclass
class LineFixture:
    """F = (1, z) on the unit disk with seven hyperplanes of P^1."""

    F: tuple[ComplexPoly, ...]
    planes: list[Hyperplane]
    weights: NochkaWeights
    config: DefectConfig
    certificates: list[HarmonicCertificate]
    domain: DiskDomain


def line_fixture(resolution: int = 65, all_omitted: bool = False) -> LineFixture:
    """One hyperplane through the origin certified by log|z| and six omitted ones.

    With ``all_omitted`` every hyperplane has its zero outside the disk and
    the certificates are all zero.
    """
    F = (ONE, Z)
    if all_omitted:
        planes = [Hyperplane.from_coefficients([2 * np.exp(2j * np.pi * j / 7), -1]) for j in range(7)]
        certs = [HarmonicCertificate.zero()] * 7
    else:
        planes = [Hyperplane.from_coefficients([0, 1])]
        planes += [Hyperplane.from_coefficients([2 * np.exp(2j * np.pi * j / 6 + 0.3j), -1]) for j in range(6)]
        certs = [HarmonicCertificate(1.0, Z)] + [HarmonicCertificate.zero()] * 6
    # the Gauss map lives in P^1, so n = 2 and the weights use n - 1 = 1
    w = compute_nochka_weights(planes, 1)
    cfg = build_defect_config(7, 2, 1, [0.0] * 7, w)
    return LineFixture(F, planes, w, cfg, certs, unit_disk(resolution))
