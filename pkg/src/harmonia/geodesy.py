"""Boundary distance on a disk under the induced metric or its conformal part.

The disk grid becomes a weighted graph with a 16-neighbour stencil. An edge
is weighted by the length of the straight segment, with the quadratic form
frozen at the segment midpoint. Nodes near the rim are joined to a virtual
source by their radial segment to the true boundary circle, so one Dijkstra
run from that source yields the whole distance field.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import DegeneratePoint, InputError, PreconditionFailed
from .gaussmap import Direction, direction_to_hyperplane, omits_hyperplane, three_in_plane_check
from .poly import DiskDomain
from .surface import HarmonicImmersion, curvature_induced, curvature_klotz, metric_sandwich_check, qc_constant

KINDS = ("induced", "klotz")
HALF_STENCIL = ((0, 1), (1, 0), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1))


def segment_lengths(s: HarmonicImmersion, kind: str, z, dz) -> np.ndarray:
    """Length of the segments [z, z + dz] with the metric taken at the midpoint."""
    if kind not in KINDS:
        raise InputError(f"metric kind must be one of {KINDS}, got {kind!r}")
    mid = np.asarray(z) + 0.5 * np.asarray(dz)
    v = s.phi_at(mid)
    nsq = np.sum(np.abs(v) ** 2, axis=0)
    q = 2 * nsq * np.abs(dz) ** 2
    if kind == "induced":
        q = q + 2 * np.real(np.sum(v * v, axis=0) * dz * dz)
    if np.any(~np.isfinite(q)) or np.any(q <= 0):
        raise DegeneratePoint(f"the {kind} metric degenerates on the grid")
    return np.sqrt(q)


def _check_nodes(s: HarmonicImmersion, kind: str, z: np.ndarray) -> None:
    # edge midpoints never coincide with nodes, so test the nodes directly
    v = s.phi_at(z)
    nsq = np.sum(np.abs(v) ** 2, axis=0)
    gap = nsq if kind == "klotz" else nsq - np.abs(np.sum(v * v, axis=0))
    bad = np.flatnonzero(~(gap > 1e-14 * np.maximum(nsq, 1e-300)))
    if bad.size:
        raise DegeneratePoint(f"the {kind} metric degenerates at grid point {complex(z[bad[0]])}")


@dataclass
class MetricGraph:
    surface: HarmonicImmersion
    kind: str
    domain: DiskDomain
    Z: np.ndarray
    mask: np.ndarray
    node_of: np.ndarray
    adjacency: object

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    @cached_property
    def distances(self) -> np.ndarray:
        """Distance from every node to the boundary, indexed like ``Z[mask]``."""
        return dijkstra(self.adjacency, directed=False, indices=self.size)[: self.size]

    def nearest_node(self, p: complex) -> int:
        pts = self.Z[self.mask]
        return int(np.argmin(np.abs(pts - p)))


def discretize_metric(s: HarmonicImmersion, kind: str = "induced", d: DiskDomain | None = None) -> MetricGraph:
    d = d or s.domain
    Z, mask = d.grid()
    _check_nodes(s, kind, Z[mask])
    node_of = np.full(Z.shape, -1)
    node_of[mask] = np.arange(mask.sum())
    n = Z.shape[0]
    rows, cols, wts = [], [], []
    exits = np.zeros(Z.shape, dtype=bool)
    for di, dj in HALF_STENCIL:
        for si, sj in ((di, dj), (-di, -dj)):
            src = np.zeros(Z.shape, dtype=bool)
            dst_ok = np.zeros(Z.shape, dtype=bool)
            r0, r1 = max(0, -si), min(n, n - si)
            c0, c1 = max(0, -sj), min(n, n - sj)
            src[r0:r1, c0:c1] = True
            dst_ok[r0:r1, c0:c1] = mask[r0 + si:r1 + si, c0 + sj:c1 + sj]
            exits |= mask & ~(src & dst_ok)
        r0, r1 = max(0, -di), min(n, n - di)
        c0, c1 = max(0, -dj), min(n, n - dj)
        a = mask[r0:r1, c0:c1] & mask[r0 + di:r1 + di, c0 + dj:c1 + dj]
        za = Z[r0:r1, c0:c1][a]
        dz = d.step * complex(dj, di)
        rows.append(node_of[r0:r1, c0:c1][a])
        cols.append(node_of[r0 + di:r1 + di, c0 + dj:c1 + dj][a])
        wts.append(segment_lengths(s, kind, za, np.full(za.shape, dz)))

    rim = np.flatnonzero(exits[mask])
    zr = Z[mask][rim]
    rel = zr - d.center
    r = np.abs(rel)
    dz = np.where(r > 0, rel / np.where(r > 0, r, 1) * (d.radius - r), d.radius)
    rows.append(rim)
    cols.append(np.full(rim.shape, mask.sum()))
    wts.append(segment_lengths(s, kind, zr, dz))

    size = int(mask.sum()) + 1
    adj = coo_matrix((np.concatenate(wts), (np.concatenate(rows), np.concatenate(cols))), shape=(size, size)).tocsr()
    return MetricGraph(s, kind, d, Z, mask, node_of, adj)


def distance_to_boundary(g: MetricGraph, p: complex) -> float:
    """Best path through a node within the stencil radius of ``p``."""
    if not g.domain.contains(p):
        raise InputError(f"{p} lies outside the domain")
    pts = g.Z[g.mask]
    near = np.flatnonzero(np.abs(pts - p) <= 2.3 * g.domain.step)
    if near.size == 0:
        return float(g.distances[g.nearest_node(p)])
    dz = pts[near] - p
    hop = np.zeros(near.size)
    moving = np.abs(dz) > 0
    hop[moving] = segment_lengths(g.surface, g.kind, np.full(moving.sum(), p), dz[moving])
    return float(np.min(g.distances[near] + hop))


@dataclass
class GeodesicField:
    kind: str
    points: np.ndarray
    distances: np.ndarray
    resolution: int

    @classmethod
    def from_graph(cls, g: MetricGraph) -> "GeodesicField":
        return cls(g.kind, g.Z[g.mask], g.distances, g.domain.grid_resolution)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["z_re", "z_im", "d"])
        for z, dist in zip(self.points, self.distances):
            w.writerow([f"{z.real:.12g}", f"{z.imag:.12g}", f"{dist:.12g}"])
        return buf.getvalue()


def distance_field(s: HarmonicImmersion, kind: str = "induced", d: DiskDomain | None = None) -> GeodesicField:
    return GeodesicField.from_graph(discretize_metric(s, kind, d))


@dataclass
class ComparisonReport:
    K: float
    sandwich_lower: float
    sandwich_upper: float
    distance_margin: float
    samples: int

    @property
    def holds(self) -> bool:
        return min(self.sandwich_lower, self.sandwich_upper) >= -1e-9 and self.distance_margin >= -1e-12


def metric_comparison_check(s: HarmonicImmersion, K: float | None = None, samples: int = 100,
                            seed: int = 42, d: DiskDomain | None = None) -> ComparisonReport:
    """Quadratic-form sandwich plus d(p) <= sqrt(2) d_Gamma(p) at sampled nodes."""
    K = qc_constant(s) if K is None else K
    sw = metric_sandwich_check(s, K)
    ind = discretize_metric(s, "induced", d).distances
    klo = discretize_metric(s, "klotz", d).distances
    rng = np.random.default_rng(seed)
    idx = rng.choice(ind.size, size=min(samples, ind.size), replace=False)
    margin = np.sqrt(2) * klo[idx] - ind[idx]
    return ComparisonReport(K, sw.lower_margin, sw.upper_margin, float(margin.min()), int(idx.size))


@dataclass
class CurvatureScan:
    constant: float
    argmax: complex
    klotz_constant: float
    klotz_argmax: complex
    resolution: int
    points: np.ndarray
    distances: np.ndarray
    scaled_curvature: np.ndarray


def check_direction_family(s: HarmonicImmersion, dirs: Sequence[Direction], d: DiskDomain | None = None) -> None:
    d = d or s.domain
    if len(dirs) != 7:
        raise PreconditionFailed(f"the scan needs exactly 7 directions, got {len(dirs)}")
    bad = three_in_plane_check(dirs)
    if bad:
        raise PreconditionFailed(f"directions {list(bad[0])} lie in a common plane")
    for j, b in enumerate(dirs):
        if not omits_hyperplane(s.phi, direction_to_hyperplane(b), d):
            raise PreconditionFailed(f"direction {j} {b.d} is attained by the normal")


def curvature_estimate_scan(s: HarmonicImmersion, dirs: Sequence[Direction],
                            d: DiskDomain | None = None) -> CurvatureScan:
    """sup |K(p)| d(p)^2 for the induced metric and its conformal counterpart."""
    check_direction_family(s, dirs, d)
    out, fields = [], []
    for kind, curv in (("induced", curvature_induced), ("klotz", curvature_klotz)):
        g = discretize_metric(s, kind, d)
        pts = g.Z[g.mask]
        val = np.abs(curv(s, pts)) * g.distances ** 2
        i = int(np.argmax(val))
        out += [float(val[i]), complex(pts[i])]
        fields.append((pts, g.distances, val))
    pts, dist, val = fields[0]
    return CurvatureScan(out[0], out[1], out[2], out[3], (d or s.domain).grid_resolution, pts, dist, val)
