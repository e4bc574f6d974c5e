"""Loading and writing of JSON inputs, CSV reports and SVG heatmaps."""
from __future__ import annotations

import csv
import json
import math
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import jsonschema
import numpy as np

from .errors import InputError
from .gaussmap import Direction, Hyperplane
from .nochka import NochkaWeights
from .poly import DiskDomain
from .surface import HarmonicImmersion


@lru_cache(maxsize=None)
def schema(name: str) -> dict:
    text = resources.files("harmonia.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(data, name: str) -> None:
    try:
        jsonschema.validate(data, schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"{name} input invalid at {where}: {exc.message}") from exc


def read_json(path: str | Path, name: str | None = None):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if name:
        validate(data, name)
    return data


def load_surface(path, grid: int | None = None) -> HarmonicImmersion:
    s = HarmonicImmersion.from_json(read_json(path, "surface"))
    if grid:
        s = HarmonicImmersion(s.phi, s.domain.with_resolution(grid))
    return s


def load_planes(path) -> list[Hyperplane]:
    return [Hyperplane.from_json(item) for item in read_json(path, "planes")]


def load_directions(path) -> list[Direction]:
    return [Direction.normalized(v) for v in read_json(path, "directions")]


def load_weights(path) -> NochkaWeights:
    return NochkaWeights.from_json(read_json(path, "weights"))


def load_domain(data: dict, grid: int | None = None) -> DiskDomain:
    d = DiskDomain.from_json(data)
    return d.with_resolution(grid) if grid else d


def fmt(x) -> str:
    """Stable text form for CSV cells."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])
    return path


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    return obj


def write_json(path: Path, data, name: str | None = None) -> Path:
    data = jsonable(data)
    if name:
        validate(data, name)
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return path


def svg_heatmap(Z: np.ndarray, values: np.ndarray, title: str, size: int = 400) -> str:
    """Square heatmap of grid values; NaN cells are left blank."""
    n = Z.shape[0]
    cell = size / n
    finite = np.isfinite(values)
    lo, hi = (float(values[finite].min()), float(values[finite].max())) if finite.any() else (0.0, 1.0)
    span = hi - lo or 1.0
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size + 24}" '
             f'viewBox="0 0 {size} {size + 24}">',
             f'<text x="4" y="16" font-family="sans-serif" font-size="12">{title} '
             f'[{lo:.4g}, {hi:.4g}]</text>']
    for i in range(n):
        for j in range(n):
            if not finite[i, j]:
                continue
            t = (values[i, j] - lo) / span
            r, g, b = int(255 * t), int(80 + 100 * (1 - abs(2 * t - 1))), int(255 * (1 - t))
            # rows run along the imaginary axis; flip so +i points up
            y = 24 + (n - 1 - i) * cell
            parts.append(f'<rect x="{j * cell:.3f}" y="{y:.3f}" width="{cell:.3f}" height="{cell:.3f}" '
                         f'fill="rgb({r},{g},{b})"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
