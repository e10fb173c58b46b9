"""Numba kernels for the shot-tracing hot path.

The solver builder issues tens of millions of traced trajectories per hole,
so the Bresenham walk and the obstacle truncation chain run inside compiled
batch kernels. The pure-Python reference lives in :mod:`caddie.simulator`;
the test suite pins both implementations to each other on random rasters.

Kernels see a classification grid (int8) instead of surface codes:

    0 playable, 1 green, 2 tree, 3 water, 4 out-of-bounds

plus a 2D prefix-sum of the obstacle indicator used to skip the walk when a
trajectory's bounding box is obstacle free.
"""

from __future__ import annotations

import numpy as np
from numba import njit

CLS_PLAYABLE = 0
CLS_GREEN = 1
CLS_TREE = 2
CLS_WATER = 3
CLS_OOB = 4

EVENT_CLEAN = 0
EVENT_TREE_STOP = 1
EVENT_WATER_DROP = 2
EVENT_OOB_RETURN = 3


def obstacle_prefix(cls_grid: np.ndarray) -> np.ndarray:
    """Inclusive 2D prefix sums of the tree/water/oob indicator."""
    obst = (cls_grid >= CLS_TREE).astype(np.int64)
    pref = np.zeros((obst.shape[0] + 1, obst.shape[1] + 1), dtype=np.int64)
    np.cumsum(np.cumsum(obst, axis=0), axis=1, out=pref[1:, 1:])
    return pref


@njit(cache=True, inline="always")
def _rect_obstacles(pref, r0, r1, c0, c1):
    # counts obstacles in rows r0..r1, cols c0..c1 inclusive
    return pref[r1 + 1, c1 + 1] - pref[r0, c1 + 1] - pref[r1 + 1, c0] + pref[r0, c0]


@njit(cache=True)
def trace_one(cls_grid, pref, r0, c0, r1, c1):
    """Outcome of one trajectory from cell (r0,c0) toward cell (r1,c1).

    The endpoint cell may lie outside the grid; the walk is clipped at the
    last in-bounds cell. Returns (final_row, final_col, penalty, event).
    """
    rows, cols = cls_grid.shape
    if 0 <= r1 < rows and 0 <= c1 < cols:
        rlo, rhi = (r0, r1) if r0 <= r1 else (r1, r0)
        clo, chi = (c0, c1) if c0 <= c1 else (c1, c0)
        if _rect_obstacles(pref, rlo, rhi, clo, chi) == 0:
            return r1, c1, 0, EVENT_CLEAN

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

    last_r, last_c = r0, c0      # end of the kept trajectory (never a tree)
    lnw_r, lnw_c = r0, c0        # last non-water cell seen on the path
    tree_stop = False
    m = 0
    d = 2 * dmin - dmaj
    for t in range(1, dmaj + 1):
        step = d > 0 if smaj > 0 else d >= 0
        if step:
            m += 1
            d -= 2 * dmaj
        d += 2 * dmin
        if col_major:
            r = r0 + smin * m
            c = c0 + smaj * t
        else:
            r = r0 + smaj * t
            c = c0 + smin * m
        if r < 0 or r >= rows or c < 0 or c >= cols:
            break  # straight path never re-enters: clip at the border cell
        code = cls_grid[r, c]
        if code == CLS_TREE:
            tree_stop = True
            break  # ball stops right before the tree cell
        last_r, last_c = r, c
        if code != CLS_WATER:
            lnw_r, lnw_c = r, c

    penalty = 0
    event = EVENT_TREE_STOP if tree_stop else EVENT_CLEAN
    fr, fc = last_r, last_c
    if cls_grid[fr, fc] == CLS_WATER:
        fr, fc = lnw_r, lnw_c
        penalty = 1
        event = EVENT_WATER_DROP
    if cls_grid[fr, fc] == CLS_OOB:
        fr, fc = r0, c0
        penalty = 1
        event = EVENT_OOB_RETURN
    return fr, fc, penalty, event


@njit(cache=True)
def trace_many(cls_grid, pref, start_r, start_c, end_r, end_c,
               out_r, out_c, out_pen, out_evt):
    for i in range(start_r.shape[0]):
        fr, fc, pen, evt = trace_one(cls_grid, pref,
                                     start_r[i], start_c[i], end_r[i], end_c[i])
        out_r[i] = fr
        out_c[i] = fc
        out_pen[i] = pen
        out_evt[i] = evt
