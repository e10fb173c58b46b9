"""Deterministic outcome of one shot realization on a hole raster.

A shot is a canonical-frame sample mapped into the world; the trajectory is
the straight segment from the ball to that hypothetical endpoint. Obstacles
shorten it in a fixed order:

1. trees: the ball stops on the cell right before the first tree on the path;
2. water: if the trajectory now ends in water, the ball drops on the last
   non-water cell of the path with a one-stroke penalty;
3. out-of-bounds: if the resulting cell is out-of-bounds, the ball returns
   to the origin of the shot with a one-stroke penalty.

At most one penalty stroke applies per shot. Endpoints beyond the raster are
clipped at the border cell before the chain runs.

This module is the pure reference; :mod:`caddie._kernels` holds the compiled
batch equivalent used by the model builder, and the tests hold the two to
identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum


from .course import PLAYABLE_CODES, HoleRaster, SurfaceCode
from .geometry import CanonicalFrame, from_canonical

__all__ = ["ShotEvent", "ShotOutcome", "StartNotPlayable", "simulate_shot"]


class StartNotPlayable(ValueError):
    pass


class ShotEvent(IntEnum):
    # values match the _kernels EVENT_* constants
    CLEAN = 0
    TREE_STOP = 1
    WATER_DROP = 2
    OOB_RETURN = 3


@dataclass(frozen=True)
class ShotOutcome:
    final: tuple[int, int]
    penalty: int
    event: ShotEvent
    landed_on_green: bool
    distance_to_pin: float


def _line_steps(r0: int, c0: int, r1: int, c1: int):
    """Yield the cells after (r0, c0) on the 8-connected midpoint line.

    Same geometry as :func:`caddie.geometry.bresenham_cells` but written as a
    generator so the truncation chain can stop early; endpoints may lie
    outside any raster.
    """
    dr, dc = r1 - r0, c1 - c0
    adr, adc = abs(dr), abs(dc)
    col_major = adc >= adr
    if col_major:
        dmaj, dmin = adc, adr
        smaj = 1 if dc >= 0 else -1
        smin = 1 if dr >= 0 else -1
    else:
        dmaj, dmin = adr, adc
        smaj = 1 if dr >= 0 else -1
        smin = 1 if dc >= 0 else -1
    m = 0
    d = 2 * dmin - dmaj
    for t in range(1, dmaj + 1):
        step = d > 0 if smaj > 0 else d >= 0
        if step:
            m += 1
            d -= 2 * dmaj
        d += 2 * dmin
        if col_major:
            yield r0 + smin * m, c0 + smaj * t
        else:
            yield r0 + smaj * t, c0 + smin * m


def simulate_shot(raster: HoleRaster, start: tuple[int, int],
                  frame: CanonicalFrame, sample) -> ShotOutcome:
    """Trace one realization from ``start`` and apply the truncation chain.

    ``frame`` is the shot's canonical frame (origin at the ball, target on
    the +y axis) and ``sample`` the canonical arrival point.
    """
    r0, c0 = int(start[0]), int(start[1])
    if not (0 <= r0 < raster.rows and 0 <= c0 < raster.cols):
        raise StartNotPlayable(f"start cell {(r0, c0)} outside the raster")
    code = raster.surface_at((r0, c0))
    if code not in PLAYABLE_CODES:
        raise StartNotPlayable(f"cannot play from a {code.name.lower()} cell")

    endpoint = from_canonical(frame, sample)
    r1, c1 = raster.point_cell(endpoint)

    grid = raster.grid
    rows, cols = raster.rows, raster.cols
    last = (r0, c0)
    last_non_water = (r0, c0)
    tree_stop = False
    for r, c in _line_steps(r0, c0, r1, c1):
        if not (0 <= r < rows and 0 <= c < cols):
            break  # clip the trajectory at the border cell
        cell_code = grid[r, c]
        if cell_code == SurfaceCode.TREE:
            tree_stop = True
            break
        last = (r, c)
        if cell_code != SurfaceCode.WATER:
            last_non_water = (r, c)

    penalty = 0
    event = ShotEvent.TREE_STOP if tree_stop else ShotEvent.CLEAN
    final = last
    if grid[final] == SurfaceCode.WATER:
        final = last_non_water
        penalty = 1
        event = ShotEvent.WATER_DROP
    if grid[final] == SurfaceCode.OOB:
        final = (r0, c0)
        penalty = 1
        event = ShotEvent.OOB_RETURN

    on_green = grid[final] == SurfaceCode.GREEN
    center = raster.cell_center(final)
    dist = math.hypot(center[0] - raster.pin[0], center[1] - raster.pin[1])
    return ShotOutcome(final=final, penalty=penalty, event=event,
                       landed_on_green=bool(on_green), distance_to_pin=dist)
