"""Command-line front end.

Exit codes: 0 success, 1 a property check failed, 2 invalid input,
3 degenerate geometry. ``HARMONIA_THREADS`` caps the number of worker
threads used by ``verify``.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .defect import HarmonicCertificate, classical_defect_polynomial, defect_relation_check, modified_defect_bound
from .errors import GeometryError, HarmoniaError, InputError
from .gaussmap import general_position_check
from .geodesy import curvature_estimate_scan, discretize_metric, distance_to_boundary
from .io import (load_directions, load_domain, load_planes, load_surface, load_weights, read_json, svg_heatmap,
                 write_csv, write_json)
from .nochka import compute_nochka_weights, verify_nochka_properties
from .poly import ComplexPoly
from .surface import curvature_induced, curvature_klotz, metric_sample, qc_constant
from .verify import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GEOMETRY = 0, 1, 2, 3

EPILOG = """exit codes:
  0  success
  1  a property check failed (verify, nochka --weights)
  2  invalid input, including failed preconditions such as coplanar directions
  3  degenerate geometry (surface not immersed, curve inside a hyperplane)
"""


class Run:
    """Collects written files and the summary of one command."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.out = Path(args.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.files: list[str] = []

    def path(self, name: str) -> Path:
        self.files.append(name)
        return self.out / name

    def csv(self, name, header, rows):
        if self.args.format != "json":
            write_csv(self.path(name), header, rows)

    def svg(self, name, Z, values, title):
        if self.args.format == "svg":
            self.path(name).write_text(svg_heatmap(Z, values, title))

    def finish(self, command: str, results: dict, ok: bool = True, inputs: dict | None = None) -> int:
        self.files.append("summary.json")
        summary = {"command": command, "seed": self.args.seed, "status": "ok" if ok else "fail",
                   "inputs": inputs or {}, "results": results, "files": sorted(self.files)}
        write_json(self.out / "summary.json", summary, "summary")
        return EXIT_OK if ok else EXIT_FAIL


def _require(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(f"{args.command} needs {', '.join(missing)}")


def _grid_values(Z, mask, values):
    full = np.full(Z.shape, np.nan)
    full[mask] = values
    return full


def cmd_analyze(args) -> int:
    _require(args, "config")
    run = Run(args)
    s = load_surface(args.config, args.grid)
    Z, mask = s.domain.grid()
    z = Z[mask]
    m = metric_sample(s, z)
    kk = curvature_klotz(s, z)
    ki = curvature_induced(s, z) if s.dimension == 3 else np.full(z.shape, np.nan)
    K = qc_constant(s)
    hopf_poly = sum((p * p for p in s.phi), ComplexPoly())
    run.csv("grid.csv", ["z_re", "z_im", "E", "F", "G", "h_re", "h_im", "k_klotz", "k_induced"],
            zip(z.real, z.imag, m.E, m.F, m.G, m.h.real, m.h.imag, kk, ki))
    shown = ki if s.dimension == 3 else kk
    run.svg("curvature.svg", Z, _grid_values(Z, mask, shown), "curvature")
    results = {
        "dimension": s.dimension,
        "K": K,
        "h_max": float(np.max(np.abs(hopf_poly(np.concatenate([z, s.domain.boundary()]))))),
        "hopf_identically_zero": hopf_poly.is_zero,
        "k_klotz_min": float(kk.min()),
        "k_klotz_max": float(kk.max()),
        "grid_points": int(z.size),
    }
    if s.dimension == 3:
        results.update(k_induced_min=float(ki.min()), k_induced_max=float(ki.max()))
    return run.finish("analyze", results, inputs={"config": str(args.config), "grid": s.domain.grid_resolution})


def cmd_verify(args) -> int:
    run = Run(args)
    only = args.only.split(",") if args.only else None
    if only:
        unknown = [n for n in only if n not in SUITES]
        if unknown:
            raise InputError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    extra = {}
    if args.weights is not None:
        _require(args, "planes")
        extra = {"weights": load_weights(args.weights), "planes": load_planes(args.planes)}
        only = only or ["nochka"]
    checks = run_suites(only, seed=args.seed, **extra)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.suite}: {c.name}" + (f"  ({c.detail})" if c.detail else ""))
    run.csv("verify.csv", ["suite", "check", "passed", "detail"], ((c.suite, c.name, c.passed, c.detail) for c in checks))
    failed = [f"{c.suite}: {c.name}" for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return run.finish("verify", {"checks": len(checks), "failed": failed}, ok=not failed,
                      inputs={"only": only or sorted(SUITES)})


def cmd_defect(args) -> int:
    _require(args, "config", "planes")
    run = Run(args)
    data = read_json(args.config, "defect")
    F = tuple(ComplexPoly.from_json(c) for c in data["curve"])
    d = load_domain(data["domain"], args.grid)
    planes = load_planes(args.planes)
    certs: dict[int, list] = {}
    for item in data.get("certificates", []):
        j = item["plane"]
        if j >= len(planes):
            raise InputError(f"certificate refers to hyperplane {j}, only {len(planes)} given")
        certs.setdefault(j, []).append((float(item["eta"]), HarmonicCertificate.from_json(item)))
    classical = [classical_defect_polynomial(F, H) for H in planes]
    modified = [modified_defect_bound(F, H, certs[j], d) if j in certs else 0.0 for j, H in enumerate(planes)]
    rows = [(j, v, "degree") for j, v in enumerate(classical)]
    rows += [(j, v, "certificate") for j, v in enumerate(modified)]
    run.csv("defect.csv", ["hyperplane", "delta", "method"], rows)
    results = {"classical": classical, "modified_lower_bound": modified, "modified_sum": sum(modified)}
    if len(planes) >= len(F) and general_position_check(planes, len(F)):
        rep = defect_relation_check(F, planes)
        results.update(classical_sum=rep.total, relation_bound=rep.bound, relation_holds=rep.holds)
    return run.finish("defect", results, inputs={"config": str(args.config), "planes": str(args.planes)})


def cmd_nochka(args) -> int:
    _require(args, "planes")
    run = Run(args)
    planes = load_planes(args.planes)
    k = planes[0].ambient - 1
    n = k if args.subgeneral is None else args.subgeneral
    if args.weights is not None:
        w = load_weights(args.weights)
        source = "supplied"
    else:
        w = compute_nochka_weights(planes, n)
        source = "computed"
        if args.format != "json":
            write_json(run.path("weights.json"), w.to_json(), "weights")
    rep = verify_nochka_properties(w, planes)
    run.csv("bullets.csv", ["check", "status", "detail"], rep.rows())
    results = {"weights": w.to_json(), "source": source, "bullets": rep.bullets}
    return run.finish("nochka", results, ok=rep.passed, inputs={"planes": str(args.planes), "n": w.n, "k": w.k})


def cmd_geodesic(args) -> int:
    _require(args, "config")
    run = Run(args)
    s = load_surface(args.config, args.grid)
    results = {}
    for kind in ("induced", "klotz"):
        g = discretize_metric(s, kind)
        pts = g.Z[g.mask]
        run.csv(f"distance_{kind}.csv", ["z_re", "z_im", "d"], zip(pts.real, pts.imag, g.distances))
        run.svg(f"distance_{kind}.svg", g.Z, _grid_values(g.Z, g.mask, g.distances), f"{kind} distance")
        results[f"d_center_{kind}"] = distance_to_boundary(g, s.domain.center)
    results["sqrt2_bound_holds"] = results["d_center_induced"] <= np.sqrt(2) * results["d_center_klotz"] + 1e-12
    return run.finish("geodesic", results, inputs={"config": str(args.config), "grid": s.domain.grid_resolution})


def cmd_curvature_scan(args) -> int:
    _require(args, "config", "directions")
    run = Run(args)
    s = load_surface(args.config, args.grid)
    dirs = load_directions(args.directions)
    scan = curvature_estimate_scan(s, dirs)
    run.csv("scan.csv", ["z_re", "z_im", "d", "abs_k_times_d2"],
            zip(scan.points.real, scan.points.imag, scan.distances, scan.scaled_curvature))
    Z, mask = s.domain.grid()
    run.svg("scan.svg", Z, _grid_values(Z, mask, scan.scaled_curvature), "|K| d^2")
    results = {"constant": scan.constant, "argmax": scan.argmax, "klotz_constant": scan.klotz_constant,
               "klotz_argmax": scan.klotz_argmax}
    return run.finish("curvature-scan", results,
                      inputs={"config": str(args.config), "directions": str(args.directions),
                              "grid": s.domain.grid_resolution})


COMMANDS = {
    "analyze": (cmd_analyze, "metric and curvature grid, quasiconformal constant"),
    "verify": (cmd_verify, "run the seeded property suites"),
    "defect": (cmd_defect, "classical defects and certified modified-defect bounds"),
    "nochka": (cmd_nochka, "compute or check Nochka weights"),
    "geodesic": (cmd_geodesic, "distance-to-boundary fields for both metrics"),
    "curvature-scan": (cmd_curvature_scan, "empirical sup of |K| d^2 under omitted directions"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="harmonia", description=__doc__.splitlines()[0],
                                epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_text) in COMMANDS.items():
        c = sub.add_parser(name, help=help_text, description=help_text, epilog=EPILOG,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        c.add_argument("--config", type=Path, help="surface JSON (defect: curve, domain and certificates)")
        c.add_argument("--planes", type=Path, help="hyperplane JSON list")
        c.add_argument("--directions", type=Path, help="JSON list of 3-vectors")
        c.add_argument("--grid", type=int, metavar="N", help="override the grid resolution")
        c.add_argument("--seed", type=int, default=42, metavar="S", help="seed for randomized suites (default 42)")
        c.add_argument("--out", default="harmonia-out", metavar="DIR", help="output directory")
        c.add_argument("--only", metavar="SUITE", help=f"comma-separated subset of {','.join(SUITES)}")
        c.add_argument("--format", choices=("csv", "json", "svg"), default="csv",
                       help="csv: tables and summary; json: summary only; svg: tables, summary and heatmap")
        c.add_argument("--weights", type=Path, help="Nochka weights JSON to check instead of computing")
        c.add_argument("--subgeneral", type=int, metavar="n", help="subgeneral index (default: general position)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.grid is not None and args.grid < 2:
        print("error: --grid must be at least 2", file=sys.stderr)
        return EXIT_INPUT
    handler = COMMANDS[args.command][0]
    try:
        return handler(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GeometryError as exc:
        print(f"degenerate: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except HarmoniaError as exc:
        print(f"failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
