"""Monte Carlo round simulation under a fixed policy and golf statistics.

Hole traces sample one stored realization per shot, so trace costs match the
model's expected costs exactly in distribution; the mean simulated score
therefore converges to the policy value from the linear-system evaluation,
which is the module's central cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import units
from .builder import HoleModel, action_outcomes
from .course import SurfaceCode
from .simulator import ShotEvent

__all__ = [
    "ShotStep",
    "HoleTrace",
    "RoundMetrics",
    "SimulationRunaway",
    "policy_outcomes",
    "simulate_hole",
    "simulate_traces",
    "compute_metrics",
    "leaderboard",
    "leaderboard_csv",
    "LEADERBOARD_COLUMNS",
]

LEADERBOARD_COLUMNS = ["first", "last", "score", "drive", "fairway", "L", "R",
                       "GiR", "dist", "water", "bunker"]


class SimulationRunaway(RuntimeError):
    pass


@dataclass
class ShotStep:
    state: int
    action: int
    dest: int
    penalty: int
    event: ShotEvent


@dataclass
class HoleTrace:
    shots: list[ShotStep]
    putt_count: int
    green_pin_dist: float

    @property
    def penalties(self) -> int:
        return sum(s.penalty for s in self.shots)

    @property
    def score(self) -> int:
        return len(self.shots) + self.penalties + self.putt_count


def policy_outcomes(model: HoleModel, policy) -> tuple[np.ndarray, np.ndarray,
                                                       np.ndarray]:
    """Per-state realization outcomes of the policy's chosen actions."""
    return action_outcomes(model, np.asarray(policy, dtype=np.int64))


def simulate_hole(model: HoleModel, policy, rng: np.random.Generator,
                  outcomes=None, max_shots: int = 30) -> HoleTrace:
    """Play one hole: sample stored realizations until the green, then putt.

    ``outcomes`` is the :func:`policy_outcomes` triple; passing it avoids
    re-tracing when simulating many holes. The shot cap guards against
    improper policies.
    """
    if outcomes is None:
        outcomes = policy_outcomes(model, policy)
    dest_arr, pen_arr, evt_arr = outcomes
    r = dest_arr.shape[1]
    policy = np.asarray(policy, dtype=np.int64)

    s = model.tee_state
    shots: list[ShotStep] = []
    while True:
        if len(shots) >= max_shots:
            raise SimulationRunaway(
                f"no green after {max_shots} shots; improper policy?")
        i = int(rng.integers(0, r))
        dest = int(dest_arr[s, i])
        shots.append(ShotStep(state=s, action=int(policy[s]), dest=dest,
                              penalty=int(pen_arr[s, i]),
                              event=ShotEvent(int(evt_arr[s, i]))))
        if dest >= 0 and model.green_mask[dest]:
            d = float(model.pin_distance[dest])
            putts = int(rng.choice(3, p=model.putting.distribution(d))) + 1
            return HoleTrace(shots=shots, putt_count=putts, green_pin_dist=d)
        s = dest


def simulate_traces(model: HoleModel, policy, n: int,
                    rng: np.random.Generator) -> list[HoleTrace]:
    outcomes = policy_outcomes(model, policy)
    return [simulate_hole(model, policy, rng, outcomes=outcomes)
            for _ in range(n)]


@dataclass
class RoundMetrics:
    score: float
    drive: float            # yards, par-4/5 tee shots
    fairway_pct: float
    miss_left_pct: float
    miss_right_pct: float
    other_miss_pct: float
    gir_pct: float
    dist_to_pin: float      # yards, first time on green
    water_pct: float
    bunker_pct: float
    n_holes: int


def _tee_lateral_sign(model: HoleModel, step: ShotStep) -> float:
    """Sign of the tee shot's lateral miss in its own canonical frame."""
    theta = model.action_angle(step.action)
    ux, uy = math.cos(theta), math.sin(theta)
    start = model.raster.cell_center(model.states[step.state])
    end = model.raster.cell_center(model.states[step.dest])
    dx, dy = end[0] - start[0], end[1] - start[1]
    return uy * dx - ux * dy  # canonical lateral coordinate


def compute_metrics(traces, model: HoleModel) -> RoundMetrics:
    """Standard per-hole statistics over simulated traces.

    Drive and fairway columns only apply on par 4 and 5; misses are split by
    the lateral sign of the tee shot, with penalized tee shots counted in a
    separate bucket. Green in regulation counts strokes including penalties.
    """
    traces = list(traces)
    n = len(traces)
    if n == 0:
        raise ValueError("no traces")
    par = model.raster.par
    long_hole = par >= 4

    scores = np.array([t.score for t in traces], dtype=np.float64)
    drives, fw, left, right, other = [], 0, 0, 0, 0
    gir = 0
    first_green = []
    water_events = 0
    bunker_shots = 0
    total_shots = 0
    for t in traces:
        total_shots += len(t.shots)
        for step in t.shots:
            if step.event == ShotEvent.WATER_DROP:
                water_events += 1
            if model.state_surface[step.state] == SurfaceCode.BUNKER:
                bunker_shots += 1
        strokes_to_green = len(t.shots) + t.penalties
        if strokes_to_green <= par - 2:
            gir += 1
        first_green.append(t.green_pin_dist)
        if long_hole:
            tee_shot = t.shots[0]
            start = model.raster.cell_center(model.states[tee_shot.state])
            end = model.raster.cell_center(model.states[tee_shot.dest])
            drives.append(math.hypot(end[0] - start[0], end[1] - start[1]))
            if tee_shot.event != ShotEvent.CLEAN:
                other += 1
            elif model.state_surface[tee_shot.dest] == SurfaceCode.FAIRWAY:
                fw += 1
            elif _tee_lateral_sign(model, tee_shot) < 0:
                left += 1
            else:
                right += 1

    return RoundMetrics(
        score=float(scores.mean()),
        drive=units.to_yards(float(np.mean(drives))) if drives else float("nan"),
        fairway_pct=fw / n if long_hole else float("nan"),
        miss_left_pct=left / n if long_hole else float("nan"),
        miss_right_pct=right / n if long_hole else float("nan"),
        other_miss_pct=other / n if long_hole else float("nan"),
        gir_pct=gir / n,
        dist_to_pin=units.to_yards(float(np.mean(first_green))),
        water_pct=water_events / total_shots,
        bunker_pct=bunker_shots / total_shots,
        n_holes=n)


def _split_name(player_id: str) -> tuple[str, str]:
    parts = player_id.replace("_", " ").split()
    if len(parts) >= 2:
        return parts[0], " ".join(parts[1:])
    return player_id, ""


def leaderboard(entries) -> list[dict]:
    """Rows ordered by ascending mean score, ties broken by player id.

    ``entries`` maps player id to :class:`RoundMetrics` (dict or pairs).
    """
    items = entries.items() if hasattr(entries, "items") else entries
    rows = []
    for player_id, m in items:
        first, last = _split_name(player_id)
        rows.append({"player_id": player_id, "first": first, "last": last,
                     "metrics": m})
    rows.sort(key=lambda row: (row["metrics"].score, row["player_id"]))
    return rows


def leaderboard_csv(rows) -> str:
    lines = [",".join(LEADERBOARD_COLUMNS)]
    for row in rows:
        m = row["metrics"]
        lines.append(",".join([
            row["first"], row["last"],
            f"{m.score:.2f}", f"{m.drive:.2f}", f"{m.fairway_pct:.2f}",
            f"{m.miss_left_pct:.2f}", f"{m.miss_right_pct:.2f}",
            f"{m.gir_pct:.2f}", f"{m.dist_to_pin:.2f}",
            f"{m.water_pct:.2f}", f"{m.bunker_pct:.2f}"]))
    return "\n".join(lines) + "\n"
