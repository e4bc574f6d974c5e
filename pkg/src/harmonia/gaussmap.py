"""Generalized Gauss map, hyperplanes of projective space and omitted directions.

Hyperplanes are stored by a Hermitian unit normal ``a``; a curve ``F`` meets
the hyperplane where ``<F, a> = sum F_k conj(a_k)`` vanishes. The linear form
``c_0 z_0 + ... + c_k z_k`` therefore corresponds to the normal ``conj(c)``,
and :meth:`Hyperplane.from_coefficients` performs that conversion.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import (AllZero, DegenerateCurve, DimensionMismatch, IndeterminatePoint,
                     InputError, TooFew)
from .poly import ComplexPoly, DiskDomain, poly_gcd, roots_in_domain
from .surface import HarmonicImmersion, phi_norm_sq, unit_normal

UNIT_TOL = 1e-12
DET_TOL = 1e-10


@dataclass(frozen=True)
class Hyperplane:
    normal: tuple[complex, ...]

    def __post_init__(self):
        a = tuple(complex(c) for c in self.normal)
        if abs(np.linalg.norm(a) - 1) > UNIT_TOL:
            raise InputError(f"hyperplane normal must have unit norm, got {np.linalg.norm(a)}")
        object.__setattr__(self, "normal", a)

    @classmethod
    def from_normal(cls, normal: Sequence[complex]) -> "Hyperplane":
        """Normalize a Hermitian normal vector."""
        a = np.asarray(normal, dtype=complex)
        nrm = np.linalg.norm(a)
        if nrm == 0:
            raise InputError("hyperplane normal is the zero vector")
        return cls(tuple(a / nrm))

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[complex]) -> "Hyperplane":
        """Hyperplane {c_0 z_0 + ... + c_k z_k = 0}."""
        return cls.from_normal(np.conj(np.asarray(coeffs, dtype=complex)))

    @property
    def ambient(self) -> int:
        return len(self.normal)

    @property
    def coefficients(self) -> np.ndarray:
        """Coefficients of the linear form cutting out the hyperplane."""
        return np.conj(np.array(self.normal))

    def to_json(self) -> dict:
        return {"normal": [[c.real, c.imag] for c in self.coefficients]}

    @classmethod
    def from_json(cls, data) -> "Hyperplane":
        try:
            coeffs = [complex(float(re), float(im)) for re, im in data["normal"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"hyperplane entries need a 'normal' list of [re, im] pairs: {exc}") from exc
        return cls.from_coefficients(coeffs)


@dataclass(frozen=True)
class Direction:
    d: tuple[float, float, float]

    def __post_init__(self):
        d = tuple(float(x) for x in self.d)
        if len(d) != 3 or abs(np.linalg.norm(d) - 1) > UNIT_TOL:
            raise InputError(f"direction must be a unit 3-vector, got {d}")
        object.__setattr__(self, "d", d)

    @classmethod
    def normalized(cls, v: Sequence[float]) -> "Direction":
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v)
        if v.shape != (3,) or n == 0:
            raise InputError(f"direction must be a nonzero 3-vector, got {v}")
        return cls(tuple(v / n))


def pairing_poly(F: Sequence[ComplexPoly], H: Hyperplane) -> ComplexPoly:
    """The polynomial <F, a> = sum_k conj(a_k) F_k."""
    if len(F) != H.ambient:
        raise InputError(f"curve has {len(F)} components but hyperplane lives in C^{H.ambient}")
    return reduce(lambda x, y: x + y, (f.scale(np.conj(a)) for f, a in zip(F, H.normal)))


def curve_values(F: Sequence[ComplexPoly], z) -> np.ndarray:
    return np.stack([np.asarray(f(z), dtype=complex) for f in F])


def reduced_representation(phi: Sequence[ComplexPoly]) -> tuple[ComplexPoly, ...]:
    """Divide all components by their common monic gcd."""
    nonzero = [p for p in phi if not p.is_zero]
    if not nonzero:
        raise AllZero("every component is the zero polynomial")
    g = reduce(poly_gcd, nonzero)
    if g.degree == 0:
        return tuple(phi)
    return tuple(p // g for p in phi)


def hyperplane_distance(F: Sequence[ComplexPoly], H: Hyperplane, z) -> np.ndarray:
    """Fubini-Study distance |<F(z), a>| / |F(z)| to the hyperplane."""
    v = curve_values(F, z)
    nrm = np.sqrt(np.sum(np.abs(v) ** 2, axis=0))
    if np.any(nrm == 0):
        raise IndeterminatePoint("F(z) = 0: the curve is not reduced at this point")
    pair = np.tensordot(np.conj(np.array(H.normal)), v, axes=(0, 0))
    return np.abs(pair) / nrm


def omits_hyperplane(F: Sequence[ComplexPoly], H: Hyperplane, d: DiskDomain) -> bool:
    p = pairing_poly(F, H)
    scale = max(f.norm() for f in F)
    if p.is_zero or p.norm() <= 1e-12 * scale:
        raise DegenerateCurve("the curve lies inside the hyperplane")
    return not roots_in_domain(p.trimmed(1e-12 * scale), d)


def direction_to_hyperplane(d: Direction) -> Hyperplane:
    return Hyperplane(tuple(complex(x) for x in d.d))


@dataclass
class AngleSandwich:
    lower: np.ndarray
    middle: np.ndarray
    upper: np.ndarray
    K: float

    @property
    def holds(self) -> bool:
        slack = 1e-12
        return bool(np.all(self.lower <= self.middle + slack) and np.all(self.middle <= self.upper + slack))

    @property
    def equality_error(self) -> float:
        """Largest gap between the middle term and |phi.b|^2/|phi|^2 (K = 1 case)."""
        ratio = self.lower * 2 * self.K ** 2 / (self.K ** 2 + 1)
        return float(np.max(np.abs(self.middle - ratio)))


def angle_sandwich_check(s: HarmonicImmersion, K: float, z, b: Direction) -> AngleSandwich:
    """Bounds on (1 - |n.b|^2)/2 by |phi.b|^2/|phi|^2, scaled by K."""
    if s.dimension != 3:
        raise DimensionMismatch("the angle comparison needs a surface in R^3")
    n = unit_normal(s, z)
    bv = np.array(b.d).reshape((3,) + (1,) * (n.ndim - 1))
    mid = (1 - np.sum(n * bv, axis=0) ** 2) / 2
    ratio = np.abs(np.sum(s.phi_at(z) * bv, axis=0)) ** 2 / phi_norm_sq(s, z)
    return AngleSandwich(
        lower=(K * K + 1) / (2 * K * K) * ratio,
        middle=mid,
        upper=(K * K + 1) / 2 * ratio,
        K=K,
    )


def _normalized_rows(vectors) -> np.ndarray:
    a = np.array(vectors, dtype=complex)
    return a / np.linalg.norm(a, axis=1, keepdims=True)


def general_position_check(planes: Sequence[Hyperplane], ambient: int) -> bool:
    """Every ``ambient`` of the normals are linearly independent."""
    if len(planes) < ambient:
        raise TooFew(f"need at least {ambient} hyperplanes, got {len(planes)}")
    for H in planes:
        if H.ambient != ambient:
            raise InputError(f"hyperplane lives in C^{H.ambient}, expected C^{ambient}")
    a = _normalized_rows([H.normal for H in planes])
    return all(abs(np.linalg.det(a[list(idx)])) > DET_TOL for idx in combinations(range(len(planes)), ambient))


def three_in_plane_check(dirs: Sequence[Direction]) -> list[tuple[int, int, int]]:
    """Index triples of directions lying in a common plane through the origin."""
    if len(dirs) < 3:
        raise TooFew("need at least three directions")
    a = np.array([d.d for d in dirs])
    return [idx for idx in combinations(range(len(dirs)), 3)
            if abs(np.linalg.det(a[list(idx)])) <= DET_TOL]


def gauss_map(s: HarmonicImmersion) -> tuple[ComplexPoly, ...]:
    """Reduced representation of [phi_1 : ... : phi_n]."""
    return reduced_representation(s.phi)

