"""Wronskians and derived curves of polynomial holomorphic curves.

For a reduced, linearly nondegenerate curve ``F = (f_0, ..., f_k)`` the s-th
derived curve has Plucker coordinates ``W(f_i0, ..., f_is)`` over increasing
index tuples. Wronskians are expanded symbolically so that every coordinate
is an exact polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.linalg import qr

from .errors import AllZero, DegenerateCurve, IndeterminatePoint, InputError, StageOutOfRange
from .gaussmap import Hyperplane
from .poly import ComplexPoly, DiskDomain

RANK_TOL = 1e-9


def wronskian(fs: Sequence[ComplexPoly]) -> ComplexPoly:
    """det[f_j^(i)] by cofactor expansion along rows, memoized on column sets."""
    fs = tuple(fs)
    m = len(fs)
    if m == 0:
        return ComplexPoly.constant(1)
    derivs = [[f.derivative(r) for f in fs] for r in range(m)]

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple[int, ...]) -> ComplexPoly:
        if row == m:
            return ComplexPoly.constant(1)
        total = ComplexPoly()
        for pos, c in enumerate(cols):
            entry = derivs[row][c]
            if entry.is_zero:
                continue
            rest = minor(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry * rest
            total = total + term if pos % 2 == 0 else total - term
        return total

    return minor(0, tuple(range(m)))


def coefficient_matrix(phi: Sequence[ComplexPoly]) -> np.ndarray:
    width = max(p.degree for p in phi) + 1
    if width <= 0:
        raise AllZero("every component is the zero polynomial")
    A = np.zeros((len(phi), width), dtype=complex)
    for i, p in enumerate(phi):
        A[i, : len(p.coeffs)] = p.coeffs
    return A


def numerical_rank(A: np.ndarray, tol: float = RANK_TOL) -> int:
    if A.size == 0:
        return 0
    sv = np.linalg.svd(A, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def nondegeneracy_rank(phi: Sequence[ComplexPoly]) -> int:
    """k such that the curve spans a projective k-plane and no smaller one."""
    if all(p.is_zero for p in phi):
        raise AllZero("every component is the zero polynomial")
    return numerical_rank(coefficient_matrix(phi)) - 1


@dataclass(frozen=True)
class Reduction:
    """A curve rewritten as phi = C @ basis with basis linearly independent."""

    basis: tuple[ComplexPoly, ...]
    C: np.ndarray
    indices: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.basis) - 1

    def restrict(self, H: Hyperplane) -> Hyperplane:
        """The hyperplane of P^k cut out on the span of the curve."""
        a = self.C.conj().T @ np.array(H.normal)
        if np.linalg.norm(a) <= 1e-12:
            raise DegenerateCurve("the hyperplane contains the whole curve")
        return Hyperplane.from_normal(a)


def nondegenerate_reduction(phi: Sequence[ComplexPoly]) -> Reduction:
    """Pick a maximal independent subfamily of components by pivoted QR."""
    A = coefficient_matrix(phi)
    r = numerical_rank(A)
    if r == 0:
        raise AllZero("every component is the zero polynomial")
    _, _, piv = qr(A.T, pivoting=True, mode="economic")
    idx = tuple(sorted(int(i) for i in piv[:r]))
    B = A[list(idx)]
    C = A @ np.linalg.pinv(B)
    for row, i in enumerate(idx):
        C[i] = 0
        C[i, row] = 1
    return Reduction(tuple(phi[i] for i in idx), C, idx)


class DerivedCurve:
    """Wronskian tables of a linearly nondegenerate curve ``F`` in P^k."""

    def __init__(self, F: Sequence[ComplexPoly]):
        self.F = tuple(F)
        self.k = len(self.F) - 1
        if nondegeneracy_rank(self.F) != self.k:
            raise DegenerateCurve(
                "curve is linearly degenerate; reduce it with nondegenerate_reduction first")
        self.tables: list[dict[tuple[int, ...], ComplexPoly]] = [
            {idx: wronskian([self.F[i] for i in idx]) for idx in combinations(range(self.k + 1), s + 1)}
            for s in range(self.k + 1)
        ]

    def _stage(self, s: int):
        if not 0 <= s <= self.k:
            raise StageOutOfRange(f"stage {s} outside 0..{self.k}")

    def w(self, idx: Sequence[int]) -> ComplexPoly:
        """W(f_idx[0], ..., f_idx[-1]) for an arbitrary ordering of distinct indices."""
        order = sorted(range(len(idx)), key=lambda i: idx[i])
        sign = _perm_sign(order)
        p = self.tables[len(idx) - 1][tuple(sorted(idx))]
        return p if sign > 0 else -p

    def norm_sq(self, s: int, z) -> np.ndarray:
        """|F~_s(z)|^2; stage -1 is identically 1."""
        if s == -1:
            return np.ones(np.shape(z))
        self._stage(s)
        return sum(np.abs(p(z)) ** 2 for p in self.tables[s].values())

    def contracted_components(self, s: int, H: Hyperplane) -> dict[tuple[int, ...], ComplexPoly]:
        """sum_{t not in I} c_t W(f_t, f_I) for each increasing s-tuple I."""
        self._stage(s)
        coeffs = H.coefficients
        out = {}
        for I in combinations(range(self.k + 1), s):
            acc = ComplexPoly()
            for t in range(self.k + 1):
                if t in I or coeffs[t] == 0:
                    continue
                acc = acc + self.w((t,) + I).scale(coeffs[t])
            out[I] = acc
        return out

    def contracted_norm_sq(self, s: int, H: Hyperplane, z) -> np.ndarray:
        return sum(np.abs(p(z)) ** 2 for p in self.contracted_components(s, H).values())

    def first_nonvanishing_component(self, s: int, H: Hyperplane) -> ComplexPoly:
        """The first contracted component (in lexicographic order) that is not identically zero."""
        for p in self.contracted_components(s, H).values():
            if not p.is_zero and p.norm() > 1e-12:
                return p
        raise DegenerateCurve(f"all stage-{s} contracted components vanish identically")

    def phi_s(self, s: int, H: Hyperplane, z) -> np.ndarray:
        den = self.norm_sq(s, z)
        if np.any(den == 0):
            raise IndeterminatePoint(f"|F~_{s}| vanishes")
        return self.contracted_norm_sq(s, H, z) / den


def _perm_sign(order: Sequence[int]) -> int:
    sign = 1
    seen = list(order)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


@lru_cache(maxsize=64)
def derived_curve(F: tuple[ComplexPoly, ...]) -> DerivedCurve:
    return DerivedCurve(F)


def derived_norm_sq(F: Sequence[ComplexPoly], s: int, z) -> np.ndarray:
    return derived_curve(tuple(F)).norm_sq(s, z)


def contracted_norm_sq(F: Sequence[ComplexPoly], s: int, H: Hyperplane, z) -> np.ndarray:
    return derived_curve(tuple(F)).contracted_norm_sq(s, H, z)


def phi_s(F: Sequence[ComplexPoly], s: int, H: Hyperplane, z) -> np.ndarray:
    return derived_curve(tuple(F)).phi_s(s, H, z)


@dataclass
class ReparamReport:
    lhs: ComplexPoly
    rhs: ComplexPoly
    max_diff: float

    @property
    def exact(self) -> bool:
        return self.lhs == self.rhs


def wronskian_reparam_check(fs: Sequence[ComplexPoly], a: complex, b: complex = 0) -> ReparamReport:
    """W_z(f) = W_w(f o z(w)) o w(z) * a^(s(s+1)/2) for w = a z + b."""
    if a == 0:
        raise InputError("affine reparametrization needs a != 0")
    s = len(fs) - 1
    lhs = wronskian(fs)
    inv_a = 1 / a
    gs = [f.compose_affine(inv_a, -b * inv_a) for f in fs]
    rhs = wronskian(gs).compose_affine(a, b).scale(a ** (s * (s + 1) // 2))
    diff = lhs - rhs
    return ReparamReport(lhs=lhs, rhs=rhs, max_diff=diff.norm())


@dataclass
class LaplacianReport:
    s: int
    max_rel_error: float
    points: int


def fs_laplacian_identity_check(F: Sequence[ComplexPoly], s: int, d: DiskDomain,
                                step: float = 1e-3, points=None) -> LaplacianReport:
    """Compare Lap(log|F~_s|^2)/4 with |F~_(s-1)|^2 |F~_(s+1)|^2 / |F~_s|^4."""
    dc = derived_curve(tuple(F))
    if not 0 <= s <= dc.k - 1:
        raise StageOutOfRange(f"the identity is checked for 0 <= s <= k-1 = {dc.k - 1}, got {s}")
    z = d.points() if points is None else np.asarray(points, dtype=complex)
    ns = dc.norm_sq(s, z)
    z = z[ns > 1e-12 * np.max(ns)]

    def u(w):
        return np.log(dc.norm_sq(s, w))

    lap = (u(z + step) + u(z - step) + u(z + 1j * step) + u(z - 1j * step) - 4 * u(z)) / step ** 2
    lhs = lap / 4
    rhs = dc.norm_sq(s - 1, z) * dc.norm_sq(s + 1, z) / dc.norm_sq(s, z) ** 2
    rel = np.abs(lhs - rhs) / np.abs(rhs)
    return LaplacianReport(s=s, max_rel_error=float(np.max(rel)), points=int(z.size))
