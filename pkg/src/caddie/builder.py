"""Assemble the per-hole, per-player shortest path model.

States are the playable and green cells of a validated raster plus the
implicit holed-out target. Every playable state gets one action per
(direction, target distance) pair; its transition row is the empirical
distribution of the traced realizations and its cost is one stroke plus the
mean penalty. Every green state gets a single hole-out action whose cost is
the expected putt count at its pin distance.

Realization samples come from the player's bootstrapped ladder by default
(``cached=True``: one shared sample set per surface and distance, matching
the profile artifact). The per-action mode redraws samples for every action
from the raw skill pairs with structurally derived seeds; both modes are
bit-reproducible regardless of construction order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .course import SURFACE_NAMES, HoleRaster, SurfaceCode
from .skills import CompleteProfile, PuttingModel, bootstrap_samples
from .ssp import SSPInstance

__all__ = [
    "Discretization",
    "HoleModel",
    "UnreachableState",
    "ProfileSurfaceMissing",
    "build_instance",
    "greedy_pin_policy",
    "action_outcomes",
    "booklet_rows",
    "save_booklet",
    "load_booklet",
    "policy_from_booklet",
]


class UnreachableState(RuntimeError):
    pass


class ProfileSurfaceMissing(LookupError):
    pass


@dataclass(frozen=True)
class Discretization:
    n_directions: int = 180
    distance_step: float = 100.0
    realizations: int = 15

    def __post_init__(self):
        if self.n_directions < 4:
            raise ValueError("need at least 4 directions")
        if self.distance_step <= 0:
            raise ValueError("distance step must be positive")
        if self.realizations < 1:
            raise ValueError("need at least one realization")

    def angles(self) -> np.ndarray:
        return np.arange(self.n_directions) * (2.0 * math.pi / self.n_directions)


@dataclass
class HoleModel:
    """SSP instance plus the state/action maps tying it back to the hole."""

    instance: SSPInstance
    raster: HoleRaster
    profile: CompleteProfile
    putting: PuttingModel
    disc: Discretization
    player_id: str
    seed: int
    cached: bool
    states: np.ndarray            # (n, 2) cell per state
    state_of_cell: np.ndarray     # (rows, cols) -> state index or -1
    state_surface: np.ndarray     # (n,) SurfaceCode values
    green_mask: np.ndarray        # (n,) bool
    pin_distance: np.ndarray      # (n,) cell center to pin, inches
    tee_state: int
    action_dir: np.ndarray        # (m,) direction index, -1 for hole-out
    action_dist: np.ndarray       # (m,) target distance inches, 0 for hole-out
    surface_distances: dict       # surface name -> ladder distances used

    def action_angle(self, action: int) -> float:
        return float(self.action_dir[action]) * 2.0 * math.pi / self.disc.n_directions


def _ladder_for(profile: CompleteProfile, surface: str,
                disc: Discretization) -> np.ndarray:
    entry = profile.surfaces.get(surface)
    if entry is None:
        raise ProfileSurfaceMissing(f"profile has no {surface!r} surface")
    n = int(math.floor(entry.max_target_distance / disc.distance_step))
    if n == 0:
        raise ProfileSurfaceMissing(
            f"{surface!r} max target {entry.max_target_distance:.0f} in "
            f"is below one distance step")
    return disc.distance_step * np.arange(1, n + 1)


def _cached_samples(profile: CompleteProfile, surface: str,
                    distances: np.ndarray, r: int) -> np.ndarray:
    """(k, r, 2) canonical samples looked up from the profile ladder."""
    entry = profile.surfaces[surface]
    if r > entry.samples.shape[1]:
        raise ValueError(
            f"asked for {r} realizations but the {surface} ladder stores "
            f"{entry.samples.shape[1]}")
    out = np.empty((len(distances), r, 2))
    for k, d in enumerate(distances):
        hits = np.flatnonzero(np.abs(entry.distances - d) < 1e-6)
        if len(hits) == 0:
            raise ValueError(
                f"distance {d:.0f} in not on the {surface} ladder; the "
                f"distance step must be a multiple of the profile's "
                f"{profile.ladder_step:.0f} in step")
        out[k] = entry.samples[hits[0], :r]
    return out


def _displacements(samples: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """World displacement per (direction, distance, realization).

    For direction angle t the canonical-to-world rotation sends a sample
    (x, y) to (uy*x + ux*y, -ux*x + uy*y) with u = (cos t, sin t).
    """
    ux = np.cos(angles)[:, None, None]
    uy = np.sin(angles)[:, None, None]
    sx = samples[None, :, :, 0]
    sy = samples[None, :, :, 1]
    disp = np.empty((len(angles),) + samples.shape[:2] + (2,))
    disp[..., 0] = uy * sx + ux * sy
    disp[..., 1] = -ux * sx + uy * sy
    return disp


def _merge_rows(dest: np.ndarray, r: int):
    """Per-row unique destinations and probabilities k/r, vectorized.

    ``dest`` has one row per action and ``r`` realization outcomes per row.
    Returns (indptr, indices, probs) CSR pieces for the block.
    """
    n_act = dest.shape[0]
    srt = np.sort(dest, axis=1)
    new = np.empty_like(srt, dtype=bool)
    new[:, 0] = True
    new[:, 1:] = srt[:, 1:] != srt[:, :-1]
    flat = srt.ravel()
    starts = np.flatnonzero(new.ravel())
    counts = np.diff(np.append(starts, n_act * r))
    indices = flat[starts]
    probs = counts / r
    per_row = np.bincount(starts // r, minlength=n_act)
    indptr = np.zeros(n_act + 1, dtype=np.int64)
    np.cumsum(per_row, out=indptr[1:])
    return indptr, indices.astype(np.int64), probs


def build_instance(raster: HoleRaster, profile: CompleteProfile,
                   disc: Discretization = Discretization(), seed: int = 0,
                   cached: bool = True) -> HoleModel:
    """Build the hole/player SSP. The raster must already be validated.

    With ``cached=False`` the profile must carry its raw skill pairs
    (in-memory ingest output); every action then draws its own realizations
    from a seed derived from (seed, state, direction, distance).
    """
    if raster.tee is None:
        raise UnreachableState("raster has no tee cell")
    border = np.concatenate([raster.grid[0], raster.grid[-1],
                             raster.grid[:, 0], raster.grid[:, -1]])
    if np.any(~np.isin(border, (SurfaceCode.TREE, SurfaceCode.OOB))):
        raise UnreachableState("raster border must be ringed by tree/oob cells")
    if not cached and profile.skill is None:
        raise ValueError("per-action sampling needs a profile with raw pairs")

    grid = raster.grid
    rows, cols = raster.rows, raster.cols
    is_state = grid <= SurfaceCode.GREEN
    states = np.argwhere(is_state)
    n_states = len(states)
    state_of_cell = np.full((rows, cols), -1, dtype=np.int64)
    state_of_cell[states[:, 0], states[:, 1]] = np.arange(n_states)
    state_surface = grid[states[:, 0], states[:, 1]].astype(np.int64)
    green_mask = state_surface == SurfaceCode.GREEN

    centers_x = (states[:, 1] + 0.5) * raster.cell_size
    centers_y = (states[:, 0] + 0.5) * raster.cell_size
    pin_distance = np.hypot(centers_x - raster.pin[0], centers_y - raster.pin[1])
    tee_state = int(state_of_cell[raster.tee[0], raster.tee[1]])

    playable_codes = sorted({int(grid[r, c]) for r, c in states
                             if grid[r, c] != SurfaceCode.GREEN})
    surf_names = {code: SURFACE_NAMES[SurfaceCode(code)] for code in playable_codes}
    angles = disc.angles()
    r = disc.realizations

    ladders = {}
    cached_disp = {}
    for code, name in surf_names.items():
        distances = _ladder_for(profile, name, disc)
        ladders[code] = distances
        if cached:
            samples = _cached_samples(profile, name, distances, r)
            cached_disp[code] = _displacements(samples, angles)

    cls_grid, pref = raster.classification()
    holeout_cost = profile.putting.expected(pin_distance)

    chunks_state, chunks_cost, chunks_dir, chunks_dist = [], [], [], []
    chunks_indptr, chunks_indices, chunks_probs = [], [], []
    nnz_base = 0
    for s in range(n_states):
        if green_mask[s]:
            chunks_state.append(np.array([s]))
            chunks_cost.append(np.array([float(holeout_cost[s])]))
            chunks_dir.append(np.array([-1]))
            chunks_dist.append(np.array([0.0]))
            chunks_indptr.append(np.array([nnz_base], dtype=np.int64))
            continue
        code = int(state_surface[s])
        distances = ladders[code]
        n_dist = len(distances)
        n_act = disc.n_directions * n_dist
        if cached:
            disp = cached_disp[code]
        else:
            samples = np.empty((disc.n_directions, n_dist, r, 2))
            for di in range(disc.n_directions):
                for k, d in enumerate(distances):
                    rng = np.random.default_rng(np.random.SeedSequence(
                        seed, spawn_key=(s, di, k)))
                    samples[di, k] = bootstrap_samples(
                        profile.skill, surf_names[code], float(d), r, rng)
            disp = np.empty_like(samples)
            for di, t in enumerate(angles):
                ux, uy = math.cos(t), math.sin(t)
                disp[di, ..., 0] = uy * samples[di, ..., 0] + ux * samples[di, ..., 1]
                disp[di, ..., 1] = -ux * samples[di, ..., 0] + uy * samples[di, ..., 1]

        ex = centers_x[s] + disp[..., 0].ravel()
        ey = centers_y[s] + disp[..., 1].ravel()
        end_c = np.floor(ex / raster.cell_size).astype(np.int64)
        end_r = np.floor(ey / raster.cell_size).astype(np.int64)
        start_r = np.full(end_r.shape, states[s, 0], dtype=np.int64)
        start_c = np.full(end_r.shape, states[s, 1], dtype=np.int64)
        out_r = np.empty_like(end_r)
        out_c = np.empty_like(end_c)
        out_pen = np.empty(end_r.shape, dtype=np.uint8)
        out_evt = np.empty(end_r.shape, dtype=np.uint8)
        _kernels.trace_many(cls_grid, pref, start_r, start_c, end_r, end_c,
                            out_r, out_c, out_pen, out_evt)

        dest = state_of_cell[out_r, out_c].reshape(n_act, r)
        pen = out_pen.reshape(n_act, r)
        indptr, indices, probs = _merge_rows(dest, r)
        chunks_state.append(np.full(n_act, s))
        chunks_cost.append(1.0 + pen.mean(axis=1))
        dir_idx = np.repeat(np.arange(disc.n_directions), n_dist)
        chunks_dir.append(dir_idx)
        chunks_dist.append(np.tile(distances, disc.n_directions))
        chunks_indptr.append(indptr[:-1] + nnz_base)
        chunks_indices.append(indices)
        chunks_probs.append(probs)
        nnz_base += len(indices)

    action_state = np.concatenate(chunks_state)
    costs = np.concatenate(chunks_cost)
    action_dir = np.concatenate(chunks_dir)
    action_dist = np.concatenate(chunks_dist)
    indptr = np.concatenate(chunks_indptr + [np.array([nnz_base], dtype=np.int64)])
    indices = (np.concatenate(chunks_indices) if chunks_indices
               else np.empty(0, dtype=np.int64))
    probs = (np.concatenate(chunks_probs) if chunks_probs
             else np.empty(0))

    instance = SSPInstance(n_states, action_state, costs, indptr, indices, probs)

    # Defensive reachability check on the assembled model.
    target_direct = np.asarray(instance.P.sum(axis=1)).ravel() < 1.0 - 1e-12
    reached = np.zeros(n_states, dtype=bool)
    reached[instance.action_state[target_direct]] = True
    P = instance.P
    while True:
        hits = (P @ reached.astype(np.float64)) > 0.0
        owners = np.zeros(n_states, dtype=bool)
        owners[instance.action_state[hits]] = True
        new = reached | owners
        if np.array_equal(new, reached):
            break
        reached = new
    if not np.all(reached):
        bad = [tuple(map(int, states[i])) for i in np.flatnonzero(~reached)[:5]]
        raise UnreachableState(f"states cannot reach the target, e.g. {bad}")

    surface_distances = {surf_names[c]: ladders[c] for c in ladders}
    return HoleModel(
        instance=instance, raster=raster, profile=profile,
        putting=profile.putting, disc=disc,
        player_id=profile.player_id, seed=seed, cached=cached,
        states=states, state_of_cell=state_of_cell,
        state_surface=state_surface, green_mask=green_mask,
        pin_distance=pin_distance, tee_state=tee_state,
        action_dir=action_dir, action_dist=action_dist,
        surface_distances=surface_distances)


def greedy_pin_policy(model: HoleModel) -> np.ndarray:
    """The naive strategy: aim straight at the pin with the nearest
    available target distance, from every state."""
    inst = model.instance
    policy = np.empty(inst.n_states, dtype=np.int64)
    step_angle = 2.0 * math.pi / model.disc.n_directions
    for s in range(inst.n_states):
        base = inst.group_ptr[s]
        if model.green_mask[s]:
            policy[s] = base
            continue
        center = model.raster.cell_center(model.states[s])
        vx = model.raster.pin[0] - center[0]
        vy = model.raster.pin[1] - center[1]
        theta = math.atan2(vy, vx) % (2.0 * math.pi)
        dir_idx = int(round(theta / step_angle)) % model.disc.n_directions
        name = SURFACE_NAMES[SurfaceCode(int(model.state_surface[s]))]
        distances = model.surface_distances[name]
        k = int(np.argmin(np.abs(distances - math.hypot(vx, vy))))
        policy[s] = base + dir_idx * len(distances) + k
    return policy


def action_outcomes(model: HoleModel, action_ids) -> tuple[np.ndarray,
                                                           np.ndarray,
                                                           np.ndarray]:
    """Re-trace the realizations of the given actions.

    Construction is deterministic, so the returned per-realization
    (destination state, penalty, event) arrays of shape (k, realizations)
    are exactly the ones the instance rows were built from. Hole-out actions
    get destination -1 (the target).
    """
    action_ids = np.asarray(action_ids, dtype=np.int64)
    disc = model.disc
    r = disc.realizations
    profile = model.profile
    dest = np.full((len(action_ids), r), -1, dtype=np.int64)
    pen = np.zeros((len(action_ids), r), dtype=np.uint8)
    evt = np.zeros((len(action_ids), r), dtype=np.uint8)
    cls_grid, pref = model.raster.classification()
    cell = model.raster.cell_size

    for j, a in enumerate(action_ids):
        s = int(model.instance.action_state[a])
        if model.green_mask[s]:
            continue
        code = int(model.state_surface[s])
        name = SURFACE_NAMES[SurfaceCode(code)]
        d = float(model.action_dist[a])
        distances = model.surface_distances[name]
        k = int(np.argmin(np.abs(distances - d)))
        di = int(model.action_dir[a])
        if model.cached:
            entry = profile.surfaces[name]
            hit = int(np.flatnonzero(np.abs(entry.distances - d) < 1e-6)[0])
            samples = entry.samples[hit, :r]
        else:
            rng = np.random.default_rng(np.random.SeedSequence(
                model.seed, spawn_key=(s, di, k)))
            samples = bootstrap_samples(profile.skill, name, d, r, rng)
        t = model.action_angle(int(a))
        ux, uy = math.cos(t), math.sin(t)
        center = model.raster.cell_center(model.states[s])
        ex = center[0] + uy * samples[:, 0] + ux * samples[:, 1]
        ey = center[1] - ux * samples[:, 0] + uy * samples[:, 1]
        end_c = np.floor(ex / cell).astype(np.int64)
        end_r = np.floor(ey / cell).astype(np.int64)
        start_r = np.full(r, model.states[s, 0], dtype=np.int64)
        start_c = np.full(r, model.states[s, 1], dtype=np.int64)
        out_r = np.empty(r, dtype=np.int64)
        out_c = np.empty(r, dtype=np.int64)
        _kernels.trace_many(cls_grid, pref, start_r, start_c, end_r, end_c,
                            out_r, out_c, pen[j], evt[j])
        dest[j] = model.state_of_cell[out_r, out_c]
    return dest, pen, evt


# ---------------------------------------------------------------------------
# Booklet export: the per-cell table of optimal action and expected strokes.


def booklet_rows(model: HoleModel, values: np.ndarray,
                 policy: np.ndarray) -> list[dict]:
    rows = []
    deg_step = 360.0 / model.disc.n_directions
    for s in range(model.instance.n_states):
        cell = [int(model.states[s, 0]), int(model.states[s, 1])]
        surface = SURFACE_NAMES[SurfaceCode(int(model.state_surface[s]))]
        if model.green_mask[s]:
            rows.append({"cell": cell, "surface": surface,
                         "value": float(values[s]), "action": None})
        else:
            a = int(policy[s])
            rows.append({"cell": cell, "surface": surface,
                         "value": float(values[s]),
                         "action": {
                             "direction_deg": float(model.action_dir[a]) * deg_step,
                             "distance_in": float(model.action_dist[a])}})
    return rows


def save_booklet(path, model: HoleModel, values: np.ndarray,
                 policy: np.ndarray, hole_id: str, solver_stats: dict) -> None:
    doc = {
        "format": "caddie-booklet/1",
        "player": model.player_id,
        "hole": hole_id,
        "par": model.raster.par,
        "seed": model.seed,
        "cached": model.cached,
        "disc": {"n_directions": model.disc.n_directions,
                 "distance_step": model.disc.distance_step,
                 "realizations": model.disc.realizations},
        "solver": solver_stats,
        "rows": booklet_rows(model, values, policy),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_booklet(path) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != "caddie-booklet/1":
        raise ValueError(f"not a booklet file: {path}")
    return doc


def policy_from_booklet(model: HoleModel, doc: dict) -> np.ndarray:
    """Map booklet rows back onto action indices of a rebuilt model."""
    inst = model.instance
    policy = np.empty(inst.n_states, dtype=np.int64)
    deg_step = 360.0 / model.disc.n_directions
    for row in doc["rows"]:
        r, c = row["cell"]
        s = int(model.state_of_cell[r, c])
        if s < 0:
            raise ValueError(f"booklet cell {row['cell']} is not a state")
        base = inst.group_ptr[s]
        if row["action"] is None:
            policy[s] = base
            continue
        name = SURFACE_NAMES[SurfaceCode(int(model.state_surface[s]))]
        distances = model.surface_distances[name]
        dir_idx = int(round(row["action"]["direction_deg"] / deg_step)) \
            % model.disc.n_directions
        k = int(np.argmin(np.abs(distances - row["action"]["distance_in"])))
        policy[s] = base + dir_idx * len(distances) + k
    return policy
