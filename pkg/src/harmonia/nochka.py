"""Nochka weights for hyperplanes in subgeneral position.

Given unit normals ``a_1..a_q`` in C^(k+1) in n-subgeneral position (any n+1
of them span), we look for weights ``omega`` and ``theta`` with

1. ``0 < omega_j * theta <= 1``;
2. ``q - 2n + k - 1 = theta * (sum(omega) - k - 1)``;
3. ``(n+1)/(k+1) <= theta <= (2n-k+1)/(k+1)``;
4. ``sum_{j in B} omega_j <= dim span{a_j : j in B}`` whenever ``#B <= n+1``.

With ``rho = 1/theta`` every condition is linear in ``(omega, rho)``, so a
single linear program decides feasibility. We maximize the smallest weight so
that condition 1 holds with a strict inequality.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .derived import numerical_rank, wronskian
from .errors import ConfigInvalid, Infeasible, InputError, NotSubgeneralPosition, NoWitness, TooFewPlanes
from .gaussmap import Hyperplane, pairing_poly
from .poly import ComplexPoly, DiskDomain, roots_in_domain

TOL = 1e-9


@dataclass(frozen=True)
class NochkaWeights:
    omega: tuple[float, ...]
    theta: float
    n: int
    k: int

    @property
    def q(self) -> int:
        return len(self.omega)

    def to_json(self) -> dict:
        return {"omega": list(self.omega), "theta": self.theta, "n": self.n, "k": self.k}

    @classmethod
    def from_json(cls, data) -> "NochkaWeights":
        try:
            return cls(tuple(float(x) for x in data["omega"]), float(data["theta"]),
                       int(data["n"]), int(data["k"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigInvalid(f"malformed weights: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _normals(planes: Sequence[Hyperplane]) -> np.ndarray:
    dims = {H.ambient for H in planes}
    if len(dims) != 1:
        raise InputError(f"hyperplanes live in different dimensions: {sorted(dims)}")
    return np.array([H.normal for H in planes])


def span_dim(normals: np.ndarray, idx: Sequence[int]) -> int:
    return numerical_rank(normals[list(idx)])


def is_subgeneral(planes: Sequence[Hyperplane], n: int) -> bool:
    """Every n+1 of the normals span the ambient space."""
    A = _normals(planes)
    dim = A.shape[1]
    size = min(n + 1, len(planes))
    return all(span_dim(A, idx) == dim for idx in combinations(range(len(planes)), size))


def _dependent_subsets(A: np.ndarray, max_size: int):
    q = A.shape[0]
    for size in range(2, max_size + 1):
        for idx in combinations(range(q), size):
            r = span_dim(A, idx)
            if r < size:
                yield idx, r


def compute_nochka_weights(planes: Sequence[Hyperplane], n: int) -> NochkaWeights:
    A = _normals(planes)
    q, dim = A.shape
    k = dim - 1
    if n < k:
        raise InputError(f"subgeneral index n = {n} is smaller than k = {k}")
    if q <= 2 * n - k + 1:
        raise TooFewPlanes(f"need more than 2n-k+1 = {2 * n - k + 1} hyperplanes, got {q}")
    if not is_subgeneral(planes, n):
        raise NotSubgeneralPosition(f"some {n + 1} of the hyperplanes do not span C^{dim}")

    c = q - 2 * n + k - 1
    # variables: omega_1..omega_q, rho, t
    nv = q + 2
    rows, rhs = [], []
    for j in range(q):
        row = np.zeros(nv)
        row[j], row[q] = 1, -1  # omega_j <= rho
        rows.append(row)
        rhs.append(0)
        row = np.zeros(nv)
        row[j], row[q + 1] = -1, 1  # t <= omega_j
        rows.append(row)
        rhs.append(0)
    for idx, r in _dependent_subsets(A, n + 1):
        row = np.zeros(nv)
        row[list(idx)] = 1
        rows.append(row)
        rhs.append(r)
    eq = np.zeros((1, nv))
    eq[0, :q], eq[0, q] = 1, -c
    bounds = [(0, 1)] * q + [((k + 1) / (2 * n - k + 1), (k + 1) / (n + 1)), (None, None)]
    obj = np.zeros(nv)
    obj[q + 1] = -1
    res = linprog(obj, A_ub=np.array(rows), b_ub=np.array(rhs), A_eq=eq, b_eq=[k + 1],
                  bounds=bounds, method="highs")
    if res.status != 0 or res.x[q + 1] <= TOL:
        raise Infeasible(f"no admissible weights found ({res.message})")

    omega = np.clip(res.x[:q], 0, 1)
    theta = c / (omega.sum() - k - 1)
    w = NochkaWeights(tuple(float(x) for x in omega), float(theta), n, k)
    report = verify_nochka_properties(w, planes)
    if not report.passed:
        raise Infeasible(f"solver output failed verification: {report.failures()}")
    return w


@dataclass
class NochkaReport:
    bullets: dict[str, bool]
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.bullets.values())

    def failures(self) -> list[str]:
        return [name for name, ok in self.bullets.items() if not ok]

    def rows(self) -> list[tuple[str, str, str]]:
        out = [(name, "pass" if ok else "fail", "") for name, ok in self.bullets.items()]
        out += [("subset", "fail", v) for v in self.violations]
        return out


def verify_nochka_properties(w: NochkaWeights, planes: Sequence[Hyperplane], tol: float = TOL) -> NochkaReport:
    A = _normals(planes)
    q, n, k, theta = len(planes), w.n, w.k, w.theta
    om = np.array(w.omega)
    bullets = {}
    if om.size != q:
        raise ConfigInvalid(f"{om.size} weights for {q} hyperplanes")
    prod = om * theta
    bullets["positivity"] = bool(np.all(prod > 0) and np.all(prod <= 1 + tol))
    bullets["sum_identity"] = bool(abs((q - 2 * n + k - 1) - theta * (om.sum() - k - 1)) <= tol)
    bullets["theta_window"] = (n + 1) / (k + 1) - tol <= theta <= (2 * n - k + 1) / (k + 1) + tol
    violations = []
    for size in range(1, min(n + 1, q) + 1):
        for idx in combinations(range(q), size):
            r = span_dim(A, idx)
            if om[list(idx)].sum() > r + tol:
                violations.append(f"{list(idx)}: sum {om[list(idx)].sum():.12g} > dim {r}")
    bullets["subset_bound"] = not violations
    return NochkaReport(bullets, violations)


@dataclass
class ProductWitness:
    basis: tuple[int, ...]
    log_lhs: float
    log_rhs: float

    @property
    def margin(self) -> float:
        return self.log_rhs - self.log_lhs


def product_inequality_check(w: NochkaWeights, planes: Sequence[Hyperplane], E: Sequence[float],
                             B: Sequence[int]) -> ProductWitness:
    """Find a basis B1 of span{a_j : j in B} with prod_B E^omega <= prod_B1 E."""
    A = _normals(planes)
    B = tuple(sorted(B))
    if not 0 < len(B) <= w.n + 1:
        raise InputError(f"subset size must lie in 1..{w.n + 1}")
    logE = np.log(np.asarray(E, dtype=float))
    if np.any(logE[list(B)] <= 0):
        raise InputError("the product inequality needs every E_j > 1")
    lhs = float(sum(w.omega[j] * logE[j] for j in B))
    r = span_dim(A, B)
    best = None
    for B1 in combinations(B, r):
        if span_dim(A, B1) != r:
            continue
        val = float(sum(logE[j] for j in B1))
        if best is None or val > best.log_rhs:
            best = ProductWitness(B1, lhs, val)
    if best is None or best.margin < -1e-12 * max(1.0, abs(lhs)):
        raise NoWitness(f"no basis subset of {list(B)} dominates the weighted product")
    return best


@dataclass
class DivisorPoint:
    z: complex
    order_wronskian: int
    orders: tuple[int, ...]
    margin: float


@dataclass
class DivisorReport:
    points: list[DivisorPoint]

    @property
    def passed(self) -> bool:
        return all(p.margin >= -TOL for p in self.points)

    @property
    def min_margin(self) -> float:
        return min((p.margin for p in self.points), default=float("inf"))


def divisor_inequality_check(F: Sequence[ComplexPoly], planes: Sequence[Hyperplane], w: NochkaWeights,
                             d: DiskDomain) -> DivisorReport:
    """At each zero of prod <F, a_j>: nu_W - sum w nu_j + sum w min(nu_j, k) >= 0."""
    k = len(F) - 1
    W = wronskian(F)
    if W.is_zero:
        raise InputError("the Wronskian vanishes identically")
    pairings = [pairing_poly(F, H) for H in planes]
    zeros: list[complex] = []
    for p in pairings:
        for z0, _ in roots_in_domain(p, d):
            if all(abs(z0 - z1) > 1e-7 for z1 in zeros):
                zeros.append(z0)
    points = []
    for z0 in sorted(zeros, key=lambda z: (z.real, z.imag)):
        nuW = W.order_at(z0)
        orders = tuple(p.order_at(z0) for p in pairings)
        margin = nuW + sum(om * (min(nu, k) - nu) for om, nu in zip(w.omega, orders))
        points.append(DivisorPoint(z0, nuW, orders, float(margin)))
    return DivisorReport(points)
