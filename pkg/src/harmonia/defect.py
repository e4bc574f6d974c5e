"""Defects of polynomial curves and the auxiliary pseudo-metrics built from them.

Covers three groups of tools:

* classical defects of polynomial curves, which reduce to degree counts;
* harmonic certificates ``mu = c log|g| + Re(h)`` witnessing the modified
  defect, checked on a grid and on shrinking circles around each zero;
* the constant windows (``N``, ``Lambda``, ``tau``, ``kappa``) and the
  pseudo-metric fields assembled from Wronskian data, together with numerical
  curvature, Schwarz-type and radial-length probes.

Every product of norms is evaluated as a sum of logarithms; points of the
excluded analytic set carry ``log density = -inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .derived import derived_curve, nondegeneracy_rank
from .errors import ConfigInvalid, DegenerateCurve, HypothesisFailed, InputError
from .gaussmap import Hyperplane, general_position_check, pairing_poly
from .nochka import NochkaWeights
from .poly import ComplexPoly, DiskDomain, poly_gcd, roots_in_domain

H2_LEVELS = 12
H2_SETTLE = 4
H2_TOL = 1e-3
DIVERGENCE_CAP = 1e9


def _curve_scale(F: Sequence[ComplexPoly]) -> float:
    return max(f.norm() for f in F)


def _nonzero_pairing(F, H) -> ComplexPoly:
    p = pairing_poly(F, H)
    if p.is_zero or p.norm() <= 1e-12 * _curve_scale(F):
        raise DegenerateCurve("the curve lies inside the hyperplane")
    return p.trimmed(1e-12 * _curve_scale(F))


# ---------------------------------------------------------------- classical

def classical_defect_polynomial(F: Sequence[ComplexPoly], H: Hyperplane) -> float:
    """1 - deg<F, a> / max deg F for a polynomial curve on the whole plane."""
    d = max(f.degree for f in F)
    if d < 1:
        raise InputError("a constant curve has no defect")
    return 1 - _nonzero_pairing(F, H).degree / d


@dataclass
class DefectReport:
    deltas: list[float]
    bound: float
    method: str = "degree"

    @property
    def total(self) -> float:
        return float(sum(self.deltas))

    @property
    def holds(self) -> bool:
        return self.total <= self.bound + 1e-12

    def rows(self) -> list[tuple[int, float, str]]:
        return [(j, d, self.method) for j, d in enumerate(self.deltas)]


def defect_relation_check(F: Sequence[ComplexPoly], planes: Sequence[Hyperplane]) -> DefectReport:
    k = nondegeneracy_rank(F)
    if k != len(F) - 1:
        raise DegenerateCurve("the defect relation needs a linearly nondegenerate curve")
    if not general_position_check(planes, len(F)):
        raise InputError("hyperplanes are not in general position")
    return DefectReport([classical_defect_polynomial(F, H) for H in planes], bound=k + 1)


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class HarmonicCertificate:
    """mu(z) = c log|g(z)| + Re(hre(z))."""

    c: float
    g: ComplexPoly = ComplexPoly((1,))
    hre: ComplexPoly = ComplexPoly()

    @classmethod
    def zero(cls) -> "HarmonicCertificate":
        return cls(0.0)

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            log_g = np.log(np.abs(self.g(z))) if self.c != 0 else np.zeros(z.shape)
        return self.c * log_g + np.real(self.hre(z))

    def to_json(self) -> dict:
        return {"c": self.c, "g": self.g.to_json(), "hre": self.hre.to_json()}

    @classmethod
    def from_json(cls, data) -> "HarmonicCertificate":
        try:
            return cls(float(data["c"]), ComplexPoly.from_json(data.get("g", [[1, 0]])),
                       ComplexPoly.from_json(data.get("hre", [])))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed certificate: {exc}") from exc


@dataclass
class RootTrace:
    z0: complex
    order: int
    maxima: list[float]
    ok: bool


@dataclass
class CertificateReport:
    h1_ok: bool
    h1_worst: float
    support_ok: bool
    roots: list[RootTrace] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def h2_ok(self) -> bool:
        return all(r.ok for r in self.roots)

    @property
    def accepted(self) -> bool:
        return self.h1_ok and self.h2_ok and self.support_ok


def _log_curve_norm(F, z) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return 0.5 * np.log(sum(np.abs(f(z)) ** 2 for f in F))


def _settles(maxima: Sequence[float]) -> bool:
    tail = np.asarray(maxima[H2_SETTLE - 1:])
    if np.all(np.isneginf(tail)):
        return True
    if not np.all(np.isfinite(tail) | np.isneginf(tail)):
        return False
    return bool(np.all(np.diff(tail) <= H2_TOL))


def check_certificate(F: Sequence[ComplexPoly], H: Hyperplane, eta: float,
                      mu: HarmonicCertificate, d: DiskDomain) -> CertificateReport:
    """Grid test of e^mu <= |F|^eta plus circle tests at the zeros of <F, a>."""
    if eta < 0:
        raise InputError("eta must be nonnegative")
    k = nondegeneracy_rank(F)
    p = _nonzero_pairing(F, H)
    zeros = roots_in_domain(p, d)
    notes = []

    z = np.concatenate([d.points(), d.boundary() * (1 - 1e-9) + d.center * 1e-9])
    with np.errstate(invalid="ignore"):
        gap = mu(z) - eta * _log_curve_norm(F, z)
    gap = np.where(np.isneginf(mu(z)), -np.inf, gap)
    worst = float(np.max(gap))
    h1_ok = worst <= 1e-9

    support_ok = True
    if mu.c != 0 and not mu.g.is_zero and mu.g.degree > 0:
        g_zeros = roots_in_domain(mu.g, d)
        if g_zeros and mu.c < 0:
            support_ok = False
            notes.append("negative coefficient with zeros in the domain makes mu unbounded above")
        for zg, _ in g_zeros:
            if all(abs(zg - z0) > 1e-7 for z0, _ in zeros):
                support_ok = False
                notes.append(f"mu is singular at {zg}, which is not a zero of <F, a>")

    traces = []
    for z0, _ in zeros:
        nu = p.order_at(z0)
        others = [abs(z0 - z1) for z1, _ in zeros if z1 != z0]
        r0 = 0.5 * min([d.radius - abs(z0 - d.center) + d.radius * 1e-3, d.radius] + others)
        ang = np.exp(2j * np.pi * np.arange(64) / 64)
        maxima = []
        for m in range(1, H2_LEVELS + 1):
            rho = r0 * 2.0 ** -m
            vals = mu(z0 + rho * ang) - min(nu, k) * math.log(rho)
            maxima.append(float(np.max(vals)))
        traces.append(RootTrace(complex(z0), nu, maxima, _settles(maxima)))
    return CertificateReport(h1_ok, worst, support_ok, traces, notes)


def modified_defect_bound(F: Sequence[ComplexPoly], H: Hyperplane,
                          certificates: Sequence[tuple[float, HarmonicCertificate]], d: DiskDomain) -> float:
    """1 - smallest eta among accepted certificates; 0 if none is accepted."""
    if not certificates:
        raise InputError("at least one certificate is required")
    accepted = [eta for eta, mu in certificates if check_certificate(F, H, eta, mu, d).accepted]
    return 1 - min(accepted) if accepted else 0.0


# ---------------------------------------------------------------- constants

@dataclass(frozen=True)
class DefectConfig:
    q: int
    n: int
    k: int
    eta: tuple[float, ...]
    N: float
    weights: NochkaWeights
    Lambda: float
    tau: float
    kappa: float

    @property
    def ratio(self) -> float:
        """2q/N."""
        return 2 * self.q / self.N

    @property
    def weighted_mass(self) -> float:
        return float(sum(w * (1 - e) for w, e in zip(self.weights.omega, self.eta)))

    @property
    def divergence_exponent(self) -> float:
        """N Lambda (1 - tau); the window keeps it in (0, 4)."""
        return self.N * self.Lambda * (1 - self.tau)

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "k": self.k, "eta": list(self.eta), "N": self.N,
                "Lambda": self.Lambda, "tau": self.tau, "kappa": self.kappa,
                "weights": self.weights.to_json()}


def _window_denominator(k: int) -> int:
    return (k + 1) ** 2 + sum(s * s for s in range(k + 1))


def n_window(q: int, k: int, mass: float) -> tuple[float, float]:
    """Open interval for 2q/N given mass = sum w_j (1 - eta_j)."""
    L = mass - (k / 2 + 1) * (k + 1)
    D1 = _window_denominator(k)
    return L / (D1 + 2 / q), L / D1


def build_defect_config(q: int, n: int, k: int, eta: Sequence[float], weights: NochkaWeights) -> DefectConfig:
    """Pick N in the middle of its window and derive Lambda, tau, kappa.

    ``n`` is the ambient count of the Gauss map (it lives in P^(n-1)); the
    weights belong to the restricted hyperplanes, which sit in (n-1)-subgeneral
    position inside P^k.
    """
    eta = tuple(float(e) for e in eta)
    if len(eta) != q or weights.q != q:
        raise ConfigInvalid(f"expected {q} values of eta and {q} weights")
    if any(e < 0 for e in eta):
        raise ConfigInvalid("eta must be nonnegative")
    if not 1 <= k <= n - 1:
        raise ConfigInvalid(f"need 1 <= k <= n-1, got k = {k}, n = {n}")
    slack = sum(1 - e for e in eta) - (2 * n - k - 1) * (k / 2 + 1)
    if slack <= 0:
        raise HypothesisFailed(f"sum(1 - eta) exceeds (2n-k-1)(k/2+1) by {slack:.6g}, need > 0")
    mass = float(sum(w * (1 - e) for w, e in zip(weights.omega, eta)))
    lo, hi = n_window(q, k, mass)
    if not 0 < lo < hi:
        raise HypothesisFailed(f"the window for 2q/N is empty ({lo:.6g}, {hi:.6g})")
    x = (lo + hi) / 2
    N = 2 * q / x
    sq = sum(s * s for s in range(k + 1))
    Lam = mass - (k + 1) - x * (k + 1) ** 2
    tau = (k * (k + 1) / 2 + x * sq) / Lam
    kappa = 1 / sum(s + x * s * s for s in range(1, k + 1))
    cfg = DefectConfig(q, n, k, eta, N, weights, Lam, tau, kappa)
    if not (0 < tau < 1 and 0 < cfg.divergence_exponent < 4):
        raise ConfigInvalid(f"window arithmetic failed: tau = {tau}, N Lambda (1 - tau) = {cfg.divergence_exponent}")
    return cfg


# ---------------------------------------------------------------- fields

@dataclass(frozen=True)
class PseudoMetricField:
    """A density on a disk, stored through its logarithm.

    ``kind == "area"`` means the metric is ``density |dz|^2`` and
    ``kind == "length"`` means ``density |dz|``. ``two_kappa`` relates the density to
    the potential whose Laplacian is tested: density = potential^two_kappa.
    """

    log_density: Callable[[np.ndarray], np.ndarray]
    domain: DiskDomain
    kind: str = "area"
    two_kappa: float = 1.0
    singular_points: tuple[complex, ...] = ()

    def __post_init__(self):
        if self.kind not in ("area", "length"):
            raise InputError(f"unknown field kind {self.kind!r}")

    def density(self, z) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_density(np.asarray(z, dtype=complex)))

    def log_length_element(self, z) -> np.ndarray:
        ld = self.log_density(np.asarray(z, dtype=complex))
        return ld if self.kind == "length" else ld / 2

    def log_area_density(self, z) -> np.ndarray:
        ld = self.log_density(np.asarray(z, dtype=complex))
        return 2 * ld if self.kind == "length" else ld

    def scaled(self, factor: float) -> "PseudoMetricField":
        """Multiply the length element by ``factor``."""
        shift = math.log(factor) * (2 if self.kind == "area" else 1)
        base = self.log_density
        return PseudoMetricField(lambda z: base(z) + shift, self.domain, self.kind,
                                 self.two_kappa, self.singular_points)

    def on(self, domain: DiskDomain) -> "PseudoMetricField":
        return PseudoMetricField(self.log_density, domain, self.kind, self.two_kappa, self.singular_points)

    def grid_values(self) -> tuple[np.ndarray, np.ndarray]:
        Z, mask = self.domain.grid()
        vals = np.full(Z.shape, np.nan)
        vals[mask] = self.density(Z[mask])
        return Z, vals


def poincare_field(d: DiskDomain) -> PseudoMetricField:
    """(2R / (R^2 - |z - c|^2))^2 |dz|^2, curvature -1."""
    R, c = d.radius, d.center

    def log_density(z):
        with np.errstate(divide="ignore", invalid="ignore"):
            return 2 * np.log(2 * R / (R * R - np.abs(z - c) ** 2))

    return PseudoMetricField(log_density, d, "area")


def _nonconstant_roots(p: ComplexPoly, d: DiskDomain) -> list[complex]:
    if p.is_zero or p.degree <= 0:
        return []
    return [z for z, _ in roots_in_domain(p.trimmed(1e-12 * p.norm()), d)]


def _unique(points) -> tuple[complex, ...]:
    out: list[complex] = []
    for z in points:
        if all(abs(z - w) > 1e-9 for w in out):
            out.append(complex(z))
    return tuple(sorted(out, key=lambda w: (w.real, w.imag)))


def _check_inputs(F, planes, weights, cfg, certs):
    k = len(F) - 1
    if nondegeneracy_rank(F) != k:
        raise ConfigInvalid("the curve must be linearly nondegenerate")
    if cfg.k != k or len(planes) != cfg.q or len(certs) != cfg.q or weights.q != cfg.q:
        raise ConfigInvalid("curve, hyperplanes, certificates and configuration disagree in size")
    for H in planes:
        if H.ambient != k + 1:
            raise ConfigInvalid(f"hyperplane in C^{H.ambient}, curve in C^{k + 1}")


def xi_log(F: Sequence[ComplexPoly], planes: Sequence[Hyperplane], weights: NochkaWeights,
           cfg: DefectConfig, certs: Sequence[HarmonicCertificate], z) -> np.ndarray:
    """log xi at the points ``z``; -inf on the excluded set."""
    _check_inputs(F, planes, weights, cfg, certs)
    z = np.asarray(z, dtype=complex)
    dc = derived_curve(tuple(F))
    k, x, N = cfg.k, cfg.ratio, cfg.N
    with np.errstate(divide="ignore", invalid="ignore"):
        log_norm = [0.5 * np.log(dc.norm_sq(s, z)) for s in range(k + 1)]
        out = cfg.Lambda * log_norm[0] + (1 + x) * log_norm[k] + 2 * x * sum(log_norm[s] for s in range(k))
        for H, om, mu in zip(planes, weights.omega, certs):
            out = out + om * (mu(z) - np.log(np.abs(pairing_poly(F, H)(z))))
            for s in range(k):
                log_phi = np.log(dc.contracted_norm_sq(s, H, z)) - 2 * log_norm[s]
                out = out - np.log(N - log_phi)
    return np.where(np.isfinite(out), out, -np.inf)


def _xi_singular_points(F, planes, d) -> tuple[complex, ...]:
    dc = derived_curve(tuple(F))
    pts = []
    for s in range(dc.k + 1):
        pts += _nonconstant_roots(reduce(poly_gcd, [p for p in dc.tables[s].values() if not p.is_zero]), d)
    for H in planes:
        pts += _nonconstant_roots(pairing_poly(F, H), d)
        for s in range(1, dc.k):
            comps = [p for p in dc.contracted_components(s, H).values() if p.norm() > 1e-12]
            pts += _nonconstant_roots(reduce(poly_gcd, comps), d)
    return _unique(pts)


def xi_field(F, planes, weights, cfg, certs, d: DiskDomain) -> PseudoMetricField:
    """The area density xi^(2 kappa); it is set to zero on the excluded set."""
    F = tuple(F)
    planes, certs = tuple(planes), tuple(certs)
    _check_inputs(F, planes, weights, cfg, certs)
    two_kappa = 2 * cfg.kappa

    def log_density(z):
        return two_kappa * xi_log(F, planes, weights, cfg, certs, z)

    return PseudoMetricField(log_density, d, "area", two_kappa, _xi_singular_points(F, planes, d))


def dsigma_field(F, planes, weights, cfg, certs, d: DiskDomain) -> PseudoMetricField:
    """Length element of the flat metric used to build a divergent path."""
    F = tuple(F)
    planes, certs = tuple(planes), tuple(certs)
    _check_inputs(F, planes, weights, cfg, certs)
    dc = derived_curve(F)
    k, x, N = cfg.k, cfg.ratio, cfg.N
    top = dc.tables[k][tuple(range(k + 1))]
    firsts = [[dc.first_nonvanishing_component(s, H) for s in range(k)] for H in planes]
    pairings = [pairing_poly(F, H) for H in planes]
    power = 1 / ((1 - cfg.tau) * cfg.Lambda)

    def log_density(z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = -(1 + x) * np.log(np.abs(top(z)))
            for p, om, mu, xs in zip(pairings, weights.omega, certs, firsts):
                out = out + om * (np.log(np.abs(p(z))) - mu(z))
                out = out - (4 / N) * sum(np.log(np.abs(c(z))) for c in xs)
            out = power * out
        return np.where(np.isnan(out), np.inf, out)

    pts = _nonconstant_roots(top, d)
    for xs in firsts:
        for c in xs:
            pts += _nonconstant_roots(c, d)
    return PseudoMetricField(log_density, d, "length", 1.0, _unique(pts))


# ---------------------------------------------------------------- probes

def _laplacian_ratio(field: PseudoMetricField, d: DiskDomain) -> float:
    z = d.points()
    c, R = d.center, d.radius
    keep = np.ones(z.shape, dtype=bool)
    for sp in field.singular_points:
        keep &= np.abs(z - sp) > 2 * d.step
    z = z[keep]
    h = np.minimum(1e-3 * R, 0.05 * (R - np.abs(z - c)))
    ld = field.log_area_density
    centre = ld(z)
    ok = np.isfinite(centre)
    z, h, centre = z[ok], h[ok], centre[ok]
    lap = (ld(z + h) + ld(z - h) + ld(z + 1j * h) + ld(z - 1j * h) - 4 * centre) / h ** 2
    ratio = lap / 4 / field.two_kappa / np.exp(centre)
    ratio = ratio[np.isfinite(ratio)]
    return float(np.min(ratio))


def schwarz_sup(field: PseudoMetricField, d: DiskDomain) -> float:
    """sup of area density * ((R^2 - |z-c|^2) / 2R)^2 over the grid."""
    z = d.points()
    R = d.radius
    log_ratio = field.log_area_density(z) + 2 * np.log((R * R - np.abs(z - d.center) ** 2) / (2 * R))
    return float(np.exp(np.max(log_ratio[~np.isnan(log_ratio)])))


@dataclass
class CurvatureCheck:
    c: float
    c_refined: float
    sup: float
    sup_refined: float

    @property
    def c_positive(self) -> bool:
        return self.c > 0 and self.c_refined > 0

    @property
    def c_stable(self) -> bool:
        return abs(self.c_refined - self.c) <= 0.1 * abs(self.c)

    @property
    def sup_stable(self) -> bool:
        return math.isfinite(self.sup) and abs(self.sup_refined - self.sup) <= 0.05 * abs(self.sup)

    @property
    def holds(self) -> bool:
        return self.c_positive and self.c_stable and self.sup_stable


def pseudo_metric_curvature_check(field: PseudoMetricField, d: DiskDomain | None = None) -> CurvatureCheck:
    """Empirical lower curvature constant and the Schwarz-type sup, at two resolutions.

    The constant is ``min (Lap log potential / 4) / density`` over grid points
    away from the singular set.
    """
    d = d or field.domain
    fine = d.with_resolution(2 * d.grid_resolution - 1)
    return CurvatureCheck(_laplacian_ratio(field, d), _laplacian_ratio(field, fine),
                          schwarz_sup(field, d), schwarz_sup(field, fine))


@dataclass
class RadialLength:
    value: float
    divergent: bool
    exponent: float | None = None
    reason: str = ""


def _local_exponent(field: PseudoMetricField, z0: complex, direction: complex) -> float:
    eps = np.array([1e-6, 1e-8]) * field.domain.radius
    vals = field.log_length_element(z0 + eps * direction)
    return float((vals[0] - vals[1]) / (np.log(eps[0]) - np.log(eps[1])))


def radial_length(field: PseudoMetricField, angle: float) -> RadialLength:
    """Length of the ray from the centre to the boundary circle along ``angle``."""
    d = field.domain
    R, c = d.radius, d.center
    u = complex(np.exp(1j * angle))
    breaks, worst = [], None
    for sp in field.singular_points:
        rel = (sp - c) / u
        if abs(rel.imag) > 1e-9 * R or not 0 <= rel.real < R:
            continue
        t0 = rel.real
        sides = [s for s in (1, -1) if 0 <= t0 + s * 1e-6 * R < R]
        exps = [_local_exponent(field, sp, s * u) for s in sides]
        e = min(exps)
        worst = e if worst is None else min(worst, e)
        if e <= -1 + 1e-6:
            return RadialLength(math.inf, True, e, f"non-integrable power {e:.4g} at {sp}")
        if 0 < t0:
            breaks.append(t0)

    def integrand(t):
        v = float(field.log_length_element(np.array([c + t * u]))[0])
        return math.exp(v) if v < 700 else math.inf

    with np.errstate(all="ignore"):
        val, _ = quad(integrand, 0, R, points=sorted(breaks) or None, limit=400)
    if not math.isfinite(val) or val > DIVERGENCE_CAP:
        return RadialLength(math.inf, True, worst, "partial integral exceeded the divergence cap")
    return RadialLength(float(val), False, worst)
