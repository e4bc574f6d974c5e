"""First fundamental form, quasiconformality and curvature of harmonic immersions.

A harmonic immersion ``X: D -> R^n`` on a disk is described entirely by its
holomorphic derivative ``phi = dX/dz``; every quantity here is a pointwise
algebraic expression in ``phi`` and ``phi'``. All functions accept a scalar
``z`` or a numpy array of points.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegeneratePoint, DimensionMismatch, InputError, NotQuasiconformal
from .poly import ComplexPoly, DiskDomain

DEGENERACY_TOL = 1e-14


@dataclass(frozen=True)
class HarmonicImmersion:
    phi: tuple[ComplexPoly, ...]
    domain: DiskDomain = field(default_factory=DiskDomain)

    def __post_init__(self):
        phi = tuple(p if isinstance(p, ComplexPoly) else ComplexPoly(p) for p in self.phi)
        if len(phi) < 3:
            raise DimensionMismatch(f"a harmonic surface needs n >= 3 components, got {len(phi)}")
        object.__setattr__(self, "phi", phi)

    @property
    def dimension(self) -> int:
        return len(self.phi)

    @property
    def dphi(self) -> tuple[ComplexPoly, ...]:
        return tuple(p.derivative() for p in self.phi)

    def phi_at(self, z) -> np.ndarray:
        """Components of phi stacked along axis 0."""
        return np.stack([np.asarray(p(z), dtype=complex) for p in self.phi])

    def dphi_at(self, z) -> np.ndarray:
        return np.stack([np.asarray(p(z), dtype=complex) for p in self.dphi])

    def position(self, z) -> np.ndarray:
        """X(z) = 2 Re of the antiderivative of phi, based at the domain center."""
        c = self.domain.center
        return np.stack(
            [2 * np.real(p.antiderivative()(z) - p.antiderivative()(c)) for p in self.phi]
        )

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "phi": [p.to_json() for p in self.phi],
            "domain": self.domain.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "HarmonicImmersion":
        try:
            phi = [ComplexPoly.from_json(c) for c in data["phi"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"surface config needs a 'phi' list: {exc}") from exc
        dim = data.get("dimension", len(phi))
        if dim != len(phi):
            raise InputError(f"dimension {dim} does not match {len(phi)} phi components")
        domain = DiskDomain.from_json(data["domain"]) if "domain" in data else DiskDomain()
        return cls(tuple(phi), domain)


@dataclass
class MetricSample:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    h: np.ndarray
    phi_norm_sq: np.ndarray
    jacobian: np.ndarray
    grad_norm_sq: np.ndarray


def _require_dim3(s: HarmonicImmersion):
    if s.dimension != 3:
        raise DimensionMismatch(f"operation is defined for surfaces in R^3 only, got n = {s.dimension}")


def hopf(s: HarmonicImmersion, z) -> np.ndarray:
    """Hopf differential coefficient h = sum phi_k^2 (bilinear)."""
    v = s.phi_at(z)
    return np.sum(v * v, axis=0)


def phi_norm_sq(s: HarmonicImmersion, z) -> np.ndarray:
    v = s.phi_at(z)
    return np.sum(np.abs(v) ** 2, axis=0)


def _gap(s: HarmonicImmersion, z):
    """Return (|phi|^2, h, |phi|^4 - |h|^2), raising on degenerate points."""
    v = s.phi_at(z)
    nsq = np.sum(np.abs(v) ** 2, axis=0)
    h = np.sum(v * v, axis=0)
    gap = nsq ** 2 - np.abs(h) ** 2
    if np.any(nsq == 0):
        raise DegeneratePoint("phi vanishes: the map is not an immersion there")
    if np.any(gap < DEGENERACY_TOL * nsq ** 2):
        raise DegeneratePoint("|h| = |phi|^2: tangent vectors are parallel")
    return nsq, h, gap


def metric_sample(s: HarmonicImmersion, z) -> MetricSample:
    v = s.phi_at(z)
    nsq = np.sum(np.abs(v) ** 2, axis=0)
    if np.any(nsq == 0):
        raise DegeneratePoint("phi vanishes: the map is not an immersion there")
    xu = 2 * v.real
    xv = -2 * v.imag
    E = np.sum(xu * xu, axis=0)
    F = np.sum(xu * xv, axis=0)
    G = np.sum(xv * xv, axis=0)
    h = np.sum(v * v, axis=0)
    jac = 2 * np.sqrt(np.maximum(nsq ** 2 - np.abs(h) ** 2, 0.0))
    return MetricSample(E=E, F=F, G=G, h=h, phi_norm_sq=nsq, jacobian=jac, grad_norm_sq=E + G)


def tangent_vectors(s: HarmonicImmersion, z) -> tuple[np.ndarray, np.ndarray]:
    """X_u = phi + conj(phi), X_v = i (phi - conj(phi))."""
    v = s.phi_at(z)
    return 2 * v.real, -2 * v.imag


def unit_normal(s: HarmonicImmersion, z) -> np.ndarray:
    _require_dim3(s)
    _gap(s, z)
    xu, xv = tangent_vectors(s, z)
    n = np.cross(xu, xv, axis=0)
    return n / np.linalg.norm(n, axis=0)


def unit_normal_complex(s: HarmonicImmersion, z) -> np.ndarray:
    """The normal written as i (conj(phi) x phi) / sqrt(|phi|^4 - |h|^2)."""
    _require_dim3(s)
    _, _, gap = _gap(s, z)
    v = s.phi_at(z)
    n = 1j * np.cross(np.conj(v), v, axis=0) / np.sqrt(gap)
    return n.real


def curvature_klotz(s: HarmonicImmersion, z) -> np.ndarray:
    """Gauss curvature of the conformal metric 2|phi|^2 |dz|^2."""
    v = s.phi_at(z)
    dv = s.dphi_at(z)
    nsq = np.sum(np.abs(v) ** 2, axis=0)
    if np.any(nsq == 0):
        raise DegeneratePoint("phi vanishes: the Klotz metric degenerates")
    dnsq = np.sum(np.abs(dv) ** 2, axis=0)
    cross = np.sum(dv * np.conj(v), axis=0)
    num = dnsq * nsq - np.abs(cross) ** 2
    return -np.maximum(num, 0.0) / nsq ** 3


def curvature_induced(s: HarmonicImmersion, z) -> np.ndarray:
    """Intrinsic curvature of the induced metric ds^2 (surfaces in R^3)."""
    _require_dim3(s)
    _, _, gap = _gap(s, z)
    v = s.phi_at(z)
    dv = s.dphi_at(z)
    triple = np.sum(np.cross(np.conj(v), v, axis=0) * dv, axis=0)
    return -np.abs(triple) ** 2 / gap ** 2


def conformal_curvature_fd(s: HarmonicImmersion, z, step: float = 1e-3) -> np.ndarray:
    """-Lap(log rho)/rho^2 for rho = sqrt(2)|phi|, by the five-point stencil."""
    z = np.asarray(z, dtype=complex)

    def log_rho(w):
        return 0.5 * np.log(2 * phi_norm_sq(s, w))

    lap = (log_rho(z + step) + log_rho(z - step) + log_rho(z + 1j * step)
           + log_rho(z - 1j * step) - 4 * log_rho(z)) / step ** 2
    return -lap / (2 * phi_norm_sq(s, z))


def dilatation(s: HarmonicImmersion, z) -> np.ndarray:
    """Pointwise K(z) solving (K^2+1)/(2K) = |phi|^2 / sqrt(|phi|^4 - |h|^2)."""
    v = s.phi_at(z)
    nsq = np.sum(np.abs(v) ** 2, axis=0)
    h = np.sum(v * v, axis=0)
    gap = nsq ** 2 - np.abs(h) ** 2
    if np.any(gap <= DEGENERACY_TOL * nsq ** 2):
        raise NotQuasiconformal("|h| reaches |phi|^2: no finite quasiconformality constant")
    lam = nsq / np.sqrt(gap)
    return lam + np.sqrt(np.maximum(lam * lam - 1, 0.0))


def qc_constant(s: HarmonicImmersion) -> float:
    """Smallest K for which X is K-quasiconformal on the closed domain.

    The supremum of the pointwise dilatation is taken over the grid and the
    boundary circle, then refined by a bounded local search started from the
    best sample.
    """
    from scipy.optimize import minimize

    d = s.domain
    pts = np.concatenate([d.points(), d.boundary()])
    k = dilatation(s, pts)
    best = int(np.argmax(k))
    kmax = float(k[best])
    if kmax == 1.0:
        return 1.0

    def neg(x):
        w = complex(x[0], x[1])
        off = w - d.center
        if abs(off) > d.radius:
            w = d.center + off * d.radius / abs(off)
        return -float(dilatation(s, w))

    z0 = pts[best]
    res = minimize(neg, [z0.real, z0.imag], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 400})
    return max(kmax, -float(res.fun))


def qc_inequality_holds(s: HarmonicImmersion, z, K: float, slack: float = 1e-12):
    """Return (gradient form, phi form) of the K-QC test at ``z``."""
    m = metric_sample(s, z)
    grad_form = m.grad_norm_sq <= (K + 1 / K) * m.jacobian * (1 + slack)
    gap = np.maximum(m.phi_norm_sq ** 2 - np.abs(m.h) ** 2, 0.0)
    phi_form = m.phi_norm_sq <= (K * K + 1) / (2 * K) * np.sqrt(gap) * (1 + slack)
    return grad_form, phi_form


def lagrange_residual(s: HarmonicImmersion, z) -> np.ndarray:
    """|(|phi'|^2 |phi|^2 - |phi'.conj(phi)|^2) - |phi' x phi|^2|.

    The Hermitian product on the left pairs with the plain cross product on
    the right; crossing with ``conj(phi)`` instead only agrees when
    ``|phi'.phi| = |phi'.conj(phi)|``, which fails for example on Enneper.
    """
    _require_dim3(s)
    v = s.phi_at(z)
    dv = s.dphi_at(z)
    lhs = np.sum(np.abs(dv) ** 2, axis=0) * np.sum(np.abs(v) ** 2, axis=0) \
        - np.abs(np.sum(dv * np.conj(v), axis=0)) ** 2
    rhs = np.sum(np.abs(np.cross(dv, v, axis=0)) ** 2, axis=0)
    return np.abs(lhs - rhs)


@dataclass
class RatioReport:
    K: float
    bound: float
    min_ratio: float
    min_margin: float
    checked: int
    skipped: int

    @property
    def holds(self) -> bool:
        return self.min_margin >= -1e-9


def curvature_ratio_bound_check(s: HarmonicImmersion, K: float | None = None,
                                points: np.ndarray | None = None) -> RatioReport:
    """|K_Gamma / K_ds2| >= (2K/(K^2+1))^4 wherever K_ds2 is nonzero."""
    _require_dim3(s)
    K = qc_constant(s) if K is None else K
    pts = s.domain.points() if points is None else np.asarray(points)
    kg = curvature_klotz(s, pts)
    ki = curvature_induced(s, pts)
    live = np.abs(ki) > 1e-300
    bound = (2 * K / (K * K + 1)) ** 4
    ratio = np.abs(kg[live]) / np.abs(ki[live])
    return RatioReport(
        K=K,
        bound=bound,
        min_ratio=float(ratio.min()) if ratio.size else float("inf"),
        min_margin=float(np.min(ratio - bound)) if ratio.size else float("inf"),
        checked=int(live.sum()),
        skipped=int((~live).sum()),
    )


def curvature_domination_slack(s: HarmonicImmersion, K: float, points=None) -> float:
    """min over points of ((K^2+1)/2K)^4 |K_Gamma| - |K_ds2|, scaled by |K_Gamma|."""
    pts = s.domain.points() if points is None else np.asarray(points)
    kg = np.abs(curvature_klotz(s, pts))
    ki = np.abs(curvature_induced(s, pts))
    c = ((K * K + 1) / (2 * K)) ** 4
    return float(np.min((c * kg - ki) / np.maximum(kg, 1.0)))


def quadratic_forms(s: HarmonicImmersion, z, directions: Sequence[float] | np.ndarray):
    """ds^2 and Gamma on unit tangent vectors at angles ``directions``.

    Returns arrays of shape (len(directions), *z.shape).
    """
    m = metric_sample(s, z)
    a = np.asarray(directions, dtype=float).reshape((-1,) + (1,) * np.ndim(m.E))
    c, si = np.cos(a), np.sin(a)
    ds2 = m.E * c * c + 2 * m.F * c * si + m.G * si * si
    gamma = 2 * m.phi_norm_sq * np.ones_like(a)
    return ds2, gamma


@dataclass
class SandwichReport:
    K: float
    lower_margin: float
    upper_margin: float
    top_eig_margin: float

    @property
    def holds(self) -> bool:
        return min(self.lower_margin, self.upper_margin, self.top_eig_margin) >= -1e-9


def metric_sandwich_check(s: HarmonicImmersion, K: float | None = None, n_dirs: int = 16,
                          points=None) -> SandwichReport:
    """2/(K^2+1) Gamma <= ds^2 <= 2K^2/(K^2+1) Gamma and ds^2 <= 4|phi|^2 |dz|^2."""
    K = qc_constant(s) if K is None else K
    pts = s.domain.points() if points is None else np.asarray(points)
    ang = np.linspace(0, np.pi, n_dirs, endpoint=False)
    ds2, gamma = quadratic_forms(s, pts, ang)
    lo = 2 / (K * K + 1) * gamma
    hi = 2 * K * K / (K * K + 1) * gamma
    m = metric_sample(s, pts)
    top = 0.5 * (m.E + m.G) + np.sqrt(0.25 * (m.E - m.G) ** 2 + m.F ** 2)
    return SandwichReport(
        K=K,
        lower_margin=float(np.min((ds2 - lo) / gamma)),
        upper_margin=float(np.min((hi - ds2) / gamma)),
        top_eig_margin=float(np.min((4 * m.phi_norm_sq - top) / m.phi_norm_sq)),
    )
