"""Plain-text grid manifests and values files.

Both formats are line oriented: ``key value...`` header lines, a
``columns`` line, then one row per grid point. Numbers are written with
17 significant digits so that reading a file back reproduces the doubles
bit for bit. The manifest checksum is the SHA-256 of its row block, and a
values file names the checksum of the grid it belongs to.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import IntegrityError
from .geometry import cartesian_to_angles, surface_area
from .quadrature import SampledFunction, SphereGrid

FORMAT_VERSION = 1
GRID_MAGIC = "# hyperfilt grid manifest"
VALUES_MAGIC = "# hyperfilt values"


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _grid_rows(grid: SphereGrid) -> list:
    angles = cartesian_to_angles(grid.points)
    rows = []
    for a, p, w in zip(angles, grid.points, grid.weights):
        rows.append(" ".join([fmt(v) for v in a] + [fmt(v) for v in p] + [fmt(w)]))
    return rows


def _digest(rows) -> str:
    h = hashlib.sha256()
    for row in rows:
        h.update(row.encode("ascii"))
        h.update(b"\n")
    return h.hexdigest()


def grid_checksum(grid: SphereGrid) -> str:
    return _digest(_grid_rows(grid))


def render_grid(grid: SphereGrid) -> str:
    rows = _grid_rows(grid)
    N = grid.N
    cols = [f"theta_{k}" for k in range(1, N)] + [f"x_{k}" for k in range(1, N + 1)] + ["weight"]
    head = [
        GRID_MAGIC,
        f"format {FORMAT_VERSION}",
        f"N {N}",
        "orders " + " ".join(str(o) for o in grid.orders),
        f"guaranteed_degree {grid.guaranteed_degree}",
        f"rows {len(rows)}",
        f"checksum {_digest(rows)}",
        "columns " + " ".join(cols),
    ]
    return "\n".join(head + rows) + "\n"


def _split_header(text: str, magic: str):
    lines = text.splitlines()
    if not lines or lines[0].strip() != magic:
        raise IntegrityError(f"missing header line {magic!r}")
    header = {}
    i = 1
    while i < len(lines):
        key, _, rest = lines[i].partition(" ")
        header[key] = rest.strip()
        i += 1
        if key == "columns":
            break
    else:
        raise IntegrityError("header has no 'columns' line")
    if header.get("format") != str(FORMAT_VERSION):
        raise IntegrityError(f"unsupported format version {header.get('format')!r}")
    return header, [ln for ln in lines[i:] if ln.strip()]


def parse_grid(text: str) -> SphereGrid:
    header, rows = _split_header(text, GRID_MAGIC)
    try:
        N = int(header["N"])
        orders = tuple(int(o) for o in header["orders"].split())
        degree = int(header["guaranteed_degree"])
        n_rows = int(header["rows"])
        checksum = header["checksum"]
    except (KeyError, ValueError) as exc:
        raise IntegrityError(f"malformed grid header: {exc}") from exc
    if len(rows) != n_rows or n_rows != math.prod(orders):
        raise IntegrityError(
            f"row count {len(rows)} disagrees with header rows={n_rows}, orders product={math.prod(orders)}"
        )
    if _digest(rows) != checksum:
        raise IntegrityError("grid checksum mismatch")
    data = np.array([[float(v) for v in row.split()] for row in rows])
    if data.shape[1] != 2 * N:
        raise IntegrityError(f"expected {2 * N} columns, found {data.shape[1]}")
    points = data[:, N - 1 : 2 * N - 1]
    weights = data[:, -1]
    area = surface_area(N)
    if abs(weights.sum() - area) > 1e-10 * area:
        raise IntegrityError(f"weights sum to {weights.sum()!r}, expected |S^{N - 1}| = {area!r}")
    points.flags.writeable = False
    weights.flags.writeable = False
    return SphereGrid(N, points, weights, orders, degree)


@dataclass(frozen=True)
class ValuesHeader:
    grid_checksum: str
    kind: str
    rows: int
    band_limit: Optional[int]


def render_values(f: SampledFunction, checksum: Optional[str] = None) -> str:
    checksum = checksum or grid_checksum(f.grid)
    complex_ = np.iscomplexobj(f.values)
    if complex_:
        rows = [f"{fmt(v.real)} {fmt(v.imag)}" for v in f.values]
    else:
        rows = [fmt(v) for v in f.values]
    head = [
        VALUES_MAGIC,
        f"format {FORMAT_VERSION}",
        f"grid_checksum {checksum}",
        f"kind {'complex' if complex_ else 'real'}",
        f"rows {len(rows)}",
        f"band_limit {'none' if f.band_limit is None else f.band_limit}",
        "columns " + ("re im" if complex_ else "value"),
    ]
    return "\n".join(head + rows) + "\n"


def parse_values(text: str, grid: SphereGrid, checksum: Optional[str] = None) -> SampledFunction:
    header, rows = _split_header(text, VALUES_MAGIC)
    checksum = checksum or grid_checksum(grid)
    if header.get("grid_checksum") != checksum:
        raise IntegrityError("values file belongs to a different grid (checksum mismatch)")
    kind = header.get("kind")
    if kind not in ("real", "complex"):
        raise IntegrityError(f"unknown value kind {kind!r}")
    if len(rows) != int(header.get("rows", -1)) or len(rows) != grid.size:
        raise IntegrityError(f"values file has {len(rows)} rows, grid has {grid.size}")
    band = header.get("band_limit", "none")
    band_limit = None if band == "none" else int(band)
    if kind == "real":
        vals = np.array([float(r) for r in rows])
    else:
        pairs = np.array([[float(v) for v in r.split()] for r in rows])
        vals = pairs[:, 0] + 1j * pairs[:, 1]
    return SampledFunction(grid, vals, band_limit)
