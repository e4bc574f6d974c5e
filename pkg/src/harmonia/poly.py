"""Complex polynomials in one variable and disk-shaped sampling domains.

Coefficients are stored in ascending powers of ``z``. All arithmetic is done
directly on the coefficient tuples so that integer and dyadic inputs stay
exact; evaluation is vectorized over numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import BothZero, InputError, ZeroPolynomial

GCD_TOL = 1e-10
BOUNDARY_SHRINK = 0.999


def _strip(coeffs: Iterable[complex]) -> tuple[complex, ...]:
    out = [complex(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class ComplexPoly:
    """Polynomial with complex coefficients, lowest power first."""

    coeffs: tuple[complex, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    # construction helpers

    @classmethod
    def constant(cls, c: complex) -> "ComplexPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: complex = 1) -> "ComplexPoly":
        return cls((0,) * degree + (c,))

    @classmethod
    def from_roots(cls, roots: Iterable[complex], lead: complex = 1) -> "ComplexPoly":
        p = cls.constant(lead)
        for r in roots:
            p = p * cls((-r, 1))
        return p

    # basic attributes

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> complex:
        return self.coeffs[-1] if self.coeffs else 0j

    def norm(self) -> float:
        """Largest coefficient modulus."""
        return max((abs(c) for c in self.coeffs), default=0.0)

    # evaluation

    def __call__(self, z):
        z = np.asarray(z, dtype=complex) if not np.isscalar(z) else complex(z)
        acc = 0j if np.isscalar(z) else np.zeros_like(z)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    # arithmetic

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0j,) * (n - len(self.coeffs))
        b = other.coeffs + (0j,) * (n - len(other.coeffs))
        return ComplexPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return ComplexPoly()
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ComplexPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ComplexPoly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        other = _as_poly(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [0j] * max(len(rem) - dq, 1)
        inv_lead = 1 / other.lead
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * inv_lead
            quot[i - dq] = c
            if c == 0:
                continue
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] -= c * b
            rem[i] = 0j
        return ComplexPoly(quot), ComplexPoly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    # calculus and substitution

    def derivative(self, order: int = 1) -> "ComplexPoly":
        c = list(self.coeffs)
        for _ in range(order):
            c = [k * c[k] for k in range(1, len(c))]
        return ComplexPoly(c)

    def antiderivative(self) -> "ComplexPoly":
        return ComplexPoly((0j,) + tuple(c / (k + 1) for k, c in enumerate(self.coeffs)))

    def compose_affine(self, a: complex, b: complex = 0) -> "ComplexPoly":
        """Return ``z -> p(a*z + b)``."""
        lin = ComplexPoly((b, a))
        out = ComplexPoly()
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def taylor_at(self, z0: complex) -> "ComplexPoly":
        """Coefficients of ``w -> p(z0 + w)``."""
        return self.compose_affine(1, z0)

    def scale(self, c: complex) -> "ComplexPoly":
        return ComplexPoly(c * x for x in self.coeffs)

    def monic(self) -> "ComplexPoly":
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial has no monic form")
        return self.scale(1 / self.lead)

    def trimmed(self, tol: float) -> "ComplexPoly":
        """Drop leading coefficients with modulus at most ``tol``."""
        c = list(self.coeffs)
        while c and abs(c[-1]) <= tol:
            c.pop()
        return ComplexPoly(c)

    def order_at(self, z0: complex, rel_tol: float = 1e-7) -> int:
        """Order of vanishing at ``z0``, read from the Taylor coefficients."""
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial vanishes to infinite order")
        t = self.taylor_at(z0).coeffs
        scale = max(abs(c) for c in t)
        for m, c in enumerate(t):
            if abs(c) > rel_tol * scale:
                return m
        return len(t) - 1

    # serialization

    def to_json(self) -> list[list[float]]:
        return [[c.real, c.imag] for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "ComplexPoly":
        try:
            return cls(complex(float(re), float(im)) for re, im in data)
        except (TypeError, ValueError) as exc:
            raise InputError(f"polynomial must be a list of [re, im] pairs: {exc}") from exc

    def __repr__(self):
        return f"ComplexPoly({list(self.coeffs)})"


def _as_poly(x) -> ComplexPoly:
    if isinstance(x, ComplexPoly):
        return x
    return ComplexPoly.constant(x)


def poly_eval(p: ComplexPoly, z):
    return p(z)


def poly_derivative(p: ComplexPoly) -> ComplexPoly:
    return p.derivative()


def poly_gcd(p: ComplexPoly, q: ComplexPoly, tol: float = GCD_TOL) -> ComplexPoly:
    """Monic gcd by the Euclidean algorithm.

    A remainder counts as zero once all of its coefficients are below ``tol``
    times the largest coefficient of the monic divisor that produced it;
    leading coefficients are trimmed against the same threshold.
    """
    if p.is_zero and q.is_zero:
        raise BothZero("gcd(0, 0) is undefined")
    a, b = (p, q) if p.degree >= q.degree else (q, p)
    if b.is_zero:
        return a.monic()
    a = a.monic()
    b = b.monic()
    while True:
        r = a % b
        thresh = tol * max(a.norm(), b.norm(), 1.0)
        r = r.trimmed(thresh)
        if r.is_zero or r.norm() <= thresh:
            return b.monic()
        a, b = b, r.monic()


@dataclass(frozen=True)
class DiskDomain:
    """Closed disk in the z-plane with a Cartesian sampling grid."""

    center: complex = 0j
    radius: float = 1.0
    grid_resolution: int = 64

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise InputError(f"radius must be positive, got {self.radius}")
        if int(self.grid_resolution) != self.grid_resolution or self.grid_resolution < 2:
            raise InputError(f"grid_resolution must be an integer >= 2, got {self.grid_resolution}")
        object.__setattr__(self, "grid_resolution", int(self.grid_resolution))

    @property
    def step(self) -> float:
        return 2 * self.radius / (self.grid_resolution - 1)

    def with_resolution(self, n: int) -> "DiskDomain":
        return DiskDomain(self.center, self.radius, n)

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        """Full square grid ``Z`` (rows = imaginary axis) and the in-disk mask."""
        t = np.linspace(-self.radius, self.radius, self.grid_resolution)
        Z = self.center + t[None, :] + 1j * t[:, None]
        mask = np.abs(Z - self.center) <= BOUNDARY_SHRINK * self.radius
        return Z, mask

    def points(self) -> np.ndarray:
        Z, mask = self.grid()
        return Z[mask]

    def boundary(self, count: int | None = None) -> np.ndarray:
        """Samples of the boundary circle."""
        count = count or 4 * self.grid_resolution
        theta = np.linspace(0, 2 * np.pi, count, endpoint=False)
        return self.center + self.radius * np.exp(1j * theta)

    def contains(self, z, rel_tol: float = 1e-12):
        return np.abs(np.asarray(z) - self.center) <= self.radius * (1 + rel_tol)

    def to_json(self) -> dict:
        return {
            "center": [self.center.real, self.center.imag],
            "radius": self.radius,
            "grid_resolution": self.grid_resolution,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DiskDomain":
        try:
            re, im = data.get("center", [0.0, 0.0])
            return cls(complex(re, im), float(data["radius"]), int(data.get("grid_resolution", 64)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad domain specification: {exc}") from exc


def _cluster_radius(p: ComplexPoly, z: complex, m: int) -> float:
    """Expected eigenvalue spread of an m-fold root of ``p`` at ``z``.

    Backward error of the companion eigenproblem is ~eps times the coefficient
    magnitudes, which moves an m-fold root by (eps * S / |p^(m)(z)/m!|)^(1/m).
    """
    s = sum(abs(c) * abs(z) ** j for j, c in enumerate(p.coeffs))
    t = abs(p.derivative(m)(z)) / math.factorial(m)
    if t == 0:
        return 0.0
    return (1e3 * np.finfo(float).eps * s / t) ** (1.0 / m)


def _group_eigenvalues(p: ComplexPoly, eig: np.ndarray) -> list[np.ndarray]:
    """Greedy grouping, largest multiplicities first.

    A group of ``m`` eigenvalues is accepted when its diameter fits inside the
    m-fold perturbation radius and its points spread like a perturbed m-fold
    root (roughly a regular m-gon, so no tight sub-cluster); among candidates
    the tightest group wins.
    """
    free = list(eig)
    groups = []
    m = len(free)
    while free:
        m = min(m, len(free))
        best = None
        if m > 1:
            pts = np.array(free)
            for i in range(len(pts)):
                idx = np.argsort(np.abs(pts - pts[i]))[:m]
                grp = pts[idx]
                dist = np.abs(grp[:, None] - grp[None, :])
                diam = np.max(dist)
                gap = np.min(dist[np.triu_indices(m, 1)])
                c = complex(np.mean(grp))
                if diam > 1e-6 * max(1.0, abs(c)) and gap < 0.3 * np.sin(np.pi / m) * diam:
                    continue
                radius = max(_cluster_radius(p, c, m), 1e-6 * max(1.0, abs(c)))
                if diam <= radius and (best is None or diam < best[0]):
                    best = (diam, idx)
        if best is None:
            if m == 1:
                groups.extend(np.array([z]) for z in free)
                break
            m -= 1
            continue
        idx = set(best[1].tolist())
        groups.append(np.array([free[i] for i in sorted(idx)]))
        free = [z for i, z in enumerate(free) if i not in idx]
    return groups


def find_roots(p: ComplexPoly) -> list[tuple[complex, int]]:
    """All roots of ``p`` with multiplicities.

    Companion-matrix eigenvalues are grouped into clusters; each cluster's
    centroid is then polished with Newton steps on the derivative of order
    ``m - 1``, where the root is simple.
    """
    if p.is_zero:
        raise ZeroPolynomial("the zero polynomial has no isolated roots")
    if p.degree == 0:
        return []
    c = np.array(p.coeffs[::-1]) / p.lead
    out = []
    for grp in _group_eigenvalues(p, np.roots(c)):
        m = len(grp)
        z = complex(np.mean(grp))
        g = p.derivative(m - 1)
        dg = g.derivative()
        for _ in range(8):
            d = dg(z)
            if d == 0:
                break
            step = g(z) / d
            if not np.isfinite(step) or abs(step) > 1e-3 * max(1.0, abs(z)):
                break
            z -= step
            if abs(step) <= 1e-15 * max(1.0, abs(z)):
                break
        out.append((z, m))
    out.sort(key=lambda t: (round(t[0].real, 12), round(t[0].imag, 12)))
    return out


def roots_in_domain(p: ComplexPoly, d: DiskDomain) -> list[tuple[complex, int]]:
    """Roots of ``p`` in the closed disk ``d``, with multiplicities."""
    return [(z, m) for z, m in find_roots(p) if d.contains(z)]
