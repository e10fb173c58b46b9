"""Target-aligned planar frames and integer grid line traversal.

Coordinates are world inches unless stated otherwise. The canonical frame of
a shot puts the origin at the ball and the target on the positive y axis, so
a canonical point (x, y) reads as lateral miss x (positive = right of the
target line seen from the ball) and longitudinal carry y.

Grid cells are (row, col) integer pairs. A continuous point maps to the cell
``floor(coordinate / cell_size)`` per axis, so a point exactly on a boundary
belongs to the higher-index cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "DegenerateFrame",
    "CanonicalFrame",
    "canonical_frame",
    "frame_for_direction",
    "to_canonical",
    "from_canonical",
    "bresenham_cells",
    "bresenham_many",
]


class DegenerateFrame(ValueError):
    """Requested a frame whose origin and pin coincide."""


def _as_point(p) -> np.ndarray:
    a = np.asarray(p, dtype=np.float64)
    if a.shape != (2,):
        raise ValueError(f"expected a 2D point, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"non-finite point {a!r}")
    return a


@dataclass(frozen=True)
class CanonicalFrame:
    """Rigid map between world coordinates and target-aligned coordinates.

    ``rotation`` is the world-to-canonical rotation (det +1); the inverse map
    applies its transpose. ``distance`` is the origin-to-pin distance.
    """

    origin: np.ndarray
    rotation: np.ndarray
    distance: float


def canonical_frame(origin, pin) -> CanonicalFrame:
    """Frame whose rotation carries ``pin - origin`` onto ``(0, distance)``."""
    o = _as_point(origin)
    p = _as_point(pin)
    vx, vy = p[0] - o[0], p[1] - o[1]
    d = float(np.hypot(vx, vy))
    if d == 0.0:
        raise DegenerateFrame("origin and pin coincide; rotation is undefined")
    ux, uy = vx / d, vy / d
    rot = np.array([[uy, -ux], [ux, uy]])
    return CanonicalFrame(origin=o, rotation=rot, distance=d)


def frame_for_direction(origin, theta: float, distance: float) -> CanonicalFrame:
    """Frame for a target ``distance`` inches away along world angle ``theta``.

    ``theta`` is radians from the +x axis, counter-clockwise.
    """
    if distance <= 0.0:
        raise DegenerateFrame("target distance must be positive")
    o = _as_point(origin)
    ux, uy = np.cos(theta), np.sin(theta)
    rot = np.array([[uy, -ux], [ux, uy]])
    return CanonicalFrame(origin=o, rotation=rot, distance=float(distance))


def to_canonical(frame: CanonicalFrame, p) -> np.ndarray:
    """World point -> canonical coordinates of ``frame``."""
    return frame.rotation @ (_as_point(p) - frame.origin)


def from_canonical(frame: CanonicalFrame, sample) -> np.ndarray:
    """Canonical sample -> world point; inverse of :func:`to_canonical`."""
    return frame.origin + frame.rotation.T @ _as_point(sample)


# ---------------------------------------------------------------------------
# Integer line traversal (8-connected midpoint Bresenham).
#
# On an exact corner crossing the minor-axis switch happens at the larger
# dominant-axis coordinate, which makes traversals of a segment and of its
# reverse cover the same cell set.


@njit(cache=True)
def _walk(r0, c0, r1, c1, out):
    dr = r1 - r0
    dc = c1 - c0
    adr = abs(dr)
    adc = abs(dc)
    col_major = adc >= adr
    if col_major:
        dmaj, dmin = adc, adr
        smaj = 1 if dc >= 0 else -1
        smin = 1 if dr >= 0 else -1
    else:
        dmaj, dmin = adr, adc
        smaj = 1 if dr >= 0 else -1
        smin = 1 if dc >= 0 else -1
    out[0, 0] = r0
    out[0, 1] = c0
    m = 0
    d = 2 * dmin - dmaj
    for t in range(1, dmaj + 1):
        step = d > 0 if smaj > 0 else d >= 0
        if step:
            m += 1
            d -= 2 * dmaj
        d += 2 * dmin
        if col_major:
            out[t, 0] = r0 + smin * m
            out[t, 1] = c0 + smaj * t
        else:
            out[t, 0] = r0 + smaj * t
            out[t, 1] = c0 + smin * m
    return dmaj + 1


@njit(cache=True)
def _walk_many(starts, ends, offsets, out):
    for i in range(starts.shape[0]):
        _walk(starts[i, 0], starts[i, 1], ends[i, 0], ends[i, 1], out[offsets[i]:])


def _check_cell(cell) -> tuple[int, int]:
    r, c = int(cell[0]), int(cell[1])
    if r < 0 or c < 0:
        raise ValueError(f"cell coordinates must be non-negative, got {(r, c)}")
    return r, c


def bresenham_cells(a, b) -> np.ndarray:
    """Ordered cells traversed from cell ``a`` to cell ``b``, inclusive.

    Returns an ``(n, 2)`` int array of (row, col) pairs with
    ``n = max(|dr|, |dc|) + 1``; consecutive cells are 8-connected and the
    sequence is monotone in the dominant axis.
    """
    r0, c0 = _check_cell(a)
    r1, c1 = _check_cell(b)
    n = max(abs(r1 - r0), abs(c1 - c0)) + 1
    out = np.empty((n, 2), dtype=np.int64)
    _walk(r0, c0, r1, c1, out)
    return out


def bresenham_many(starts, ends) -> tuple[np.ndarray, np.ndarray]:
    """Batch traversal: packed cells plus per-segment offsets.

    Returns ``(cells, offsets)`` where segment ``i`` occupies rows
    ``offsets[i]:offsets[i+1]`` of ``cells``.
    """
    starts = np.ascontiguousarray(starts, dtype=np.int64)
    ends = np.ascontiguousarray(ends, dtype=np.int64)
    if starts.shape != ends.shape or starts.ndim != 2 or starts.shape[1] != 2:
        raise ValueError("starts and ends must both have shape (n, 2)")
    lengths = np.maximum(np.abs(ends[:, 0] - starts[:, 0]),
                         np.abs(ends[:, 1] - starts[:, 1])) + 1
    offsets = np.zeros(len(lengths) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    out = np.empty((offsets[-1], 2), dtype=np.int64)
    _walk_many(starts, ends, offsets, out)
    return out, offsets
