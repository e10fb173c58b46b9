"""Hole rasters: the ASCII file format, geometry helpers, and validation.

A hole file is a JSON header line followed by one text row per grid row::

    {"cell_size_in": 55.0, "pin": [1677.5, 6187.5], "par": 4}
    OOOOOOOOOO
    OXXFFFFXXO
    ...

Cell characters: T tee, F fairway, R rough, B bunker, G green, W water,
X tree, O out-of-bounds. Cell (row, col) spans
``x in [col*s, (col+1)*s)``, ``y in [row*s, (row+1)*s)`` for cell size s,
so the first text line is the row nearest y = 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from . import _kernels, units

__all__ = [
    "SurfaceCode",
    "HoleRaster",
    "ParseError",
    "InvariantViolation",
    "ValidationReport",
    "parse_hole",
    "serialize_hole",
    "load_hole",
    "save_hole",
    "validate_hole",
]


class ParseError(ValueError):
    pass


class InvariantViolation(ValueError):
    pass


class SurfaceCode(IntEnum):
    TEE = 0
    FAIRWAY = 1
    ROUGH = 2
    BUNKER = 3
    GREEN = 4
    WATER = 5
    TREE = 6
    OOB = 7


CODE_CHARS = "TFRBGWXO"
_CHAR_TO_CODE = {ch: SurfaceCode(i) for i, ch in enumerate(CODE_CHARS)}
PLAYABLE_CODES = (SurfaceCode.TEE, SurfaceCode.FAIRWAY,
                  SurfaceCode.ROUGH, SurfaceCode.BUNKER)
SURFACE_NAMES = {
    SurfaceCode.TEE: "tee",
    SurfaceCode.FAIRWAY: "fairway",
    SurfaceCode.ROUGH: "rough",
    SurfaceCode.BUNKER: "bunker",
    SurfaceCode.GREEN: "green",
    SurfaceCode.WATER: "water",
    SurfaceCode.TREE: "tree",
    SurfaceCode.OOB: "oob",
}

# SurfaceCode -> kernel classification (see _kernels docstring)
_CLS_LUT = np.array([
    _kernels.CLS_PLAYABLE,  # TEE
    _kernels.CLS_PLAYABLE,  # FAIRWAY
    _kernels.CLS_PLAYABLE,  # ROUGH
    _kernels.CLS_PLAYABLE,  # BUNKER
    _kernels.CLS_GREEN,     # GREEN
    _kernels.CLS_WATER,     # WATER
    _kernels.CLS_TREE,      # TREE
    _kernels.CLS_OOB,       # OOB
], dtype=np.int8)


@dataclass
class HoleRaster:
    """Immutable 2D hole model: surface grid, pin, tee, par, resolution."""

    grid: np.ndarray          # uint8 SurfaceCode values, shape (rows, cols)
    cell_size: float          # inches per cell side
    pin: np.ndarray           # world inches
    par: int
    tee: tuple[int, int] | None
    _cls: np.ndarray | None = field(default=None, repr=False, compare=False)
    _prefix: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def rows(self) -> int:
        return self.grid.shape[0]

    @property
    def cols(self) -> int:
        return self.grid.shape[1]

    def cell_center(self, cell) -> np.ndarray:
        r, c = cell
        return np.array([(c + 0.5) * self.cell_size, (r + 0.5) * self.cell_size])

    def point_cell(self, p) -> tuple[int, int]:
        """Cell containing a world point; boundary points go to the higher cell."""
        return (int(math.floor(p[1] / self.cell_size)),
                int(math.floor(p[0] / self.cell_size)))

    def surface_at(self, cell) -> SurfaceCode:
        return SurfaceCode(int(self.grid[cell[0], cell[1]]))

    def playable_mask(self) -> np.ndarray:
        return self.grid <= SurfaceCode.BUNKER

    def classification(self) -> tuple[np.ndarray, np.ndarray]:
        """Kernel class grid and obstacle prefix sums, computed once."""
        if self._cls is None:
            object.__setattr__(self, "_cls", _CLS_LUT[self.grid])
            object.__setattr__(self, "_prefix", _kernels.obstacle_prefix(self._cls))
        return self._cls, self._prefix


def parse_hole(text: str) -> HoleRaster:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty hole file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad header line: {exc}") from exc
    for key in ("cell_size_in", "pin", "par"):
        if key not in header:
            raise ParseError(f"header missing field {key!r}")

    body = [ln for ln in lines[1:] if ln.strip()]
    if not body:
        raise ParseError("no grid rows")
    cols = len(body[0])
    grid = np.empty((len(body), cols), dtype=np.uint8)
    for r, line in enumerate(body):
        if len(line) != cols:
            raise ParseError(f"row {r} has {len(line)} cells, expected {cols}")
        for c, ch in enumerate(line):
            code = _CHAR_TO_CODE.get(ch)
            if code is None:
                raise InvariantViolation(f"unknown surface character {ch!r} at row {r}")
            grid[r, c] = code

    cell_size = float(header["cell_size_in"])
    if not (units.CELL_SIZE_MIN_IN <= cell_size <= units.CELL_SIZE_MAX_IN):
        raise InvariantViolation(
            f"cell size {cell_size} in outside "
            f"[{units.CELL_SIZE_MIN_IN}, {units.CELL_SIZE_MAX_IN}]")
    par = int(header["par"])
    if par not in (3, 4, 5):
        raise InvariantViolation(f"par must be 3, 4 or 5, got {par}")
    pin = np.asarray(header["pin"], dtype=np.float64)
    if pin.shape != (2,) or not np.all(np.isfinite(pin)):
        raise ParseError(f"bad pin coordinate {header['pin']!r}")

    raster = HoleRaster(grid=grid, cell_size=cell_size, pin=pin, par=par, tee=None)
    pr, pc = raster.point_cell(pin)
    if not (0 <= pr < raster.rows and 0 <= pc < raster.cols):
        raise InvariantViolation("pin lies outside the raster")
    if grid[pr, pc] != SurfaceCode.GREEN:
        raise InvariantViolation(
            f"pin cell ({pr},{pc}) is {SURFACE_NAMES[SurfaceCode(int(grid[pr, pc]))]}, "
            "expected green")

    tees = np.argwhere(grid == SurfaceCode.TEE)
    if len(tees) > 1:
        raise InvariantViolation(f"expected at most one tee cell, found {len(tees)}")
    raster.tee = (int(tees[0][0]), int(tees[0][1])) if len(tees) == 1 else None
    return raster


def serialize_hole(raster: HoleRaster) -> str:
    header = json.dumps({
        "cell_size_in": raster.cell_size,
        "pin": [float(raster.pin[0]), float(raster.pin[1])],
        "par": raster.par,
    })
    rows = ["".join(CODE_CHARS[v] for v in row) for row in raster.grid]
    return "\n".join([header] + rows) + "\n"


def load_hole(path) -> HoleRaster:
    with open(path, "r", encoding="ascii") as fh:
        return parse_hole(fh.read())


def save_hole(raster: HoleRaster, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(serialize_hole(raster))


# ---------------------------------------------------------------------------
# Validation: every playable cell must be able to reach the green through a
# chain of probe shots, so the downstream shortest-path model is well posed.


@dataclass
class ValidationReport:
    accepted: bool
    unreachable: list[tuple[int, int]]
    border_violations: list[tuple[int, int]]
    tee_reaches_green: bool
    notes: list[str]


def _probe_ladder(raster: HoleRaster) -> np.ndarray:
    diag = math.hypot(raster.rows * raster.cell_size, raster.cols * raster.cell_size)
    dists = [raster.cell_size]
    while dists[-1] < diag:
        dists.append(dists[-1] * 1.5)
    return np.array(dists)


def validate_hole(raster: HoleRaster, n_directions: int = 180) -> ValidationReport:
    """Probe-shot reachability check, independent of any player profile.

    Fires deterministic straight probes (``n_directions`` angles crossed with
    a geometric distance ladder) from every playable cell and follows the
    simulator's truncation rules; a cell passes when some probe chain ends on
    the green. The border ring must be tree or out-of-bounds so trajectories
    can never leave the map.
    """
    notes: list[str] = []
    grid = raster.grid
    border = np.zeros_like(grid, dtype=bool)
    border[0, :] = border[-1, :] = True
    border[:, 0] = border[:, -1] = True
    bad_border = border & ~np.isin(grid, (SurfaceCode.TREE, SurfaceCode.OOB))
    border_violations = [tuple(map(int, rc)) for rc in np.argwhere(bad_border)]
    if border_violations:
        notes.append(f"{len(border_violations)} border cells are not tree/oob")

    cls_grid, pref = raster.classification()
    playable = np.argwhere(raster.playable_mask())
    if len(playable) == 0:
        return ValidationReport(False, [], border_violations, False,
                                notes + ["no playable cells"])

    dists = _probe_ladder(raster)
    thetas = np.arange(n_directions) * (2.0 * math.pi / n_directions)
    ux = np.cos(thetas)[:, None] * dists[None, :]
    uy = np.sin(thetas)[:, None] * dists[None, :]
    n_probe = ux.size

    centers_x = (playable[:, 1] + 0.5) * raster.cell_size
    centers_y = (playable[:, 0] + 0.5) * raster.cell_size

    n_cells = len(playable)
    flat_edges = []
    chunk = max(1, 2_000_000 // n_probe)
    out_r = np.empty(n_probe, dtype=np.int64)
    out_c = np.empty(n_probe, dtype=np.int64)
    out_pen = np.empty(n_probe, dtype=np.uint8)
    out_evt = np.empty(n_probe, dtype=np.uint8)
    for i0 in range(0, n_cells, chunk):
        for i in range(i0, min(i0 + chunk, n_cells)):
            ex = np.floor((centers_x[i] + ux.ravel()) / raster.cell_size).astype(np.int64)
            ey = np.floor((centers_y[i] + uy.ravel()) / raster.cell_size).astype(np.int64)
            sr = np.full(n_probe, playable[i, 0], dtype=np.int64)
            sc = np.full(n_probe, playable[i, 1], dtype=np.int64)
            _kernels.trace_many(cls_grid, pref, sr, sc, ey, ex,
                                out_r, out_c, out_pen, out_evt)
            src = playable[i, 0] * raster.cols + playable[i, 1]
            dst = np.unique(out_r * raster.cols + out_c)
            flat_edges.append((src, dst))

    # Fixpoint: a cell succeeds if some probe lands on green or on a
    # succeeding cell.
    green_flat = set((np.argwhere(grid == SurfaceCode.GREEN)[:, 0] * raster.cols
                      + np.argwhere(grid == SurfaceCode.GREEN)[:, 1]).tolist())
    ok = {f for f in green_flat}
    changed = True
    while changed:
        changed = False
        for src, dst in flat_edges:
            if src in ok:
                continue
            for d in dst:
                if int(d) in ok:
                    ok.add(src)
                    changed = True
                    break

    unreachable = []
    for r, c in playable:
        if int(r) * raster.cols + int(c) not in ok:
            unreachable.append((int(r), int(c)))

    tee_ok = raster.tee is not None and (
        raster.tee[0] * raster.cols + raster.tee[1] in ok)
    if raster.tee is None:
        notes.append("raster has no tee cell")
    accepted = (not unreachable) and (not border_violations) and tee_ok
    return ValidationReport(accepted, unreachable, border_violations, tee_ok, notes)
