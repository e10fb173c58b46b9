"""Read-only HTTP service over solved artifacts, feeding the caddie UI.

Serves hole rasters, booklets, per-cell values and a single-shot what-if
simulator. Artifacts are loaded lazily and cached; every endpoint is
stateless, and /simulate accepts a seed so interactions replay exactly.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import course, skills
from .course import CODE_CHARS, PLAYABLE_CODES, SURFACE_NAMES
from .geometry import frame_for_direction
from .simulator import simulate_shot

__all__ = ["ArtifactStore", "create_app"]


class ArtifactStore:
    """Lazy, cached access to hole files, profiles and booklets."""

    def __init__(self, holes_dir: Path, profiles_dir: Path, policies_dir: Path):
        self.holes_dir = Path(holes_dir)
        self.profiles_dir = Path(profiles_dir)
        self.policies_dir = Path(policies_dir)
        self._holes: dict[str, course.HoleRaster] = {}
        self._profiles: dict[str, skills.CompleteProfile] = {}
        self._booklets: dict[tuple[str, str], dict] = {}

    def hole_ids(self) -> list[str]:
        return sorted(p.stem for p in self.holes_dir.glob("*.txt"))

    def hole(self, hole_id: str) -> course.HoleRaster:
        if hole_id not in self._holes:
            path = self.holes_dir / f"{hole_id}.txt"
            if not path.exists():
                raise KeyError(hole_id)
            self._holes[hole_id] = course.load_hole(path)
        return self._holes[hole_id]

    def profile(self, player: str) -> skills.CompleteProfile:
        if player not in self._profiles:
            path = self.profiles_dir / f"{player}.json"
            if not path.exists():
                raise KeyError(player)
            self._profiles[player] = skills.load_profile(path)
        return self._profiles[player]

    def booklet(self, player: str, hole_id: str) -> dict:
        key = (player, hole_id)
        if key not in self._booklets:
            path = self.policies_dir / player / f"{hole_id}.json"
            if not path.exists():
                raise KeyError(key)
            from .builder import load_booklet
            self._booklets[key] = load_booklet(path)
        return self._booklets[key]


class SimulateRequest(BaseModel):
    hole: str
    player: str
    cell: tuple[int, int]
    direction_deg: float
    distance_in: float
    seed: int | None = None


def create_app(store: ArtifactStore, frontend_dist: Path | None = None) -> FastAPI:
    app = FastAPI(title="caddie service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.get("/holes")
    def list_holes():
        return {"holes": store.hole_ids()}

    @app.get("/holes/{hole_id}")
    def get_hole(hole_id: str):
        try:
            raster = store.hole(hole_id)
        except KeyError:
            raise HTTPException(404, f"unknown hole {hole_id!r}")
        return {
            "id": hole_id,
            "rows": raster.rows,
            "cols": raster.cols,
            "cell_size_in": raster.cell_size,
            "par": raster.par,
            "pin": [float(raster.pin[0]), float(raster.pin[1])],
            "tee": list(raster.tee) if raster.tee else None,
            "grid": ["".join(CODE_CHARS[v] for v in row) for row in raster.grid],
        }

    @app.get("/policies/{player}/{hole_id}")
    def get_policy(player: str, hole_id: str):
        try:
            return store.booklet(player, hole_id)
        except KeyError:
            raise HTTPException(404, f"no booklet for {player}/{hole_id}")

    @app.get("/values/{player}/{hole_id}/{row}/{col}")
    def get_value(player: str, hole_id: str, row: int, col: int):
        try:
            doc = store.booklet(player, hole_id)
        except KeyError:
            raise HTTPException(404, f"no booklet for {player}/{hole_id}")
        for entry in doc["rows"]:
            if entry["cell"] == [row, col]:
                return {"value": entry["value"], "best_action": entry["action"]}
        raise HTTPException(404, f"cell ({row},{col}) is not a state")

    @app.post("/simulate")
    def post_simulate(req: SimulateRequest):
        try:
            raster = store.hole(req.hole)
            profile = store.profile(req.player)
        except KeyError as exc:
            raise HTTPException(404, f"unknown artifact {exc}")
        r, c = req.cell
        if not (0 <= r < raster.rows and 0 <= c < raster.cols):
            raise HTTPException(404, f"cell ({r},{c}) outside the raster")
        code = raster.surface_at((r, c))
        if code not in PLAYABLE_CODES:
            raise HTTPException(422, f"cannot play from {code.name.lower()}")
        surface = SURFACE_NAMES[code]
        entry = profile.surfaces.get(surface)
        if entry is None:
            raise HTTPException(422, f"profile has no {surface} data")
        if req.distance_in <= 0:
            raise HTTPException(422, "distance must be positive")

        k = int(np.argmin(np.abs(entry.distances - req.distance_in)))
        samples = entry.samples[k]
        rng = np.random.default_rng(req.seed)
        sample = samples[int(rng.integers(0, len(samples)))]
        theta = math.radians(req.direction_deg)
        frame = frame_for_direction(raster.cell_center((r, c)), theta,
                                    float(entry.distances[k]))
        outcome = simulate_shot(raster, (r, c), frame, sample)
        resp = {
            "final_cell": [outcome.final[0], outcome.final[1]],
            "penalty": outcome.penalty,
            "event": outcome.event.name,
            "landed_on_green": outcome.landed_on_green,
            "distance_to_pin": outcome.distance_to_pin,
            "expected_putts": None,
            "sampled_putts": None,
        }
        if outcome.landed_on_green:
            resp["expected_putts"] = float(
                profile.putting.expected(outcome.distance_to_pin))
            probs = profile.putting.distribution(outcome.distance_to_pin)
            resp["sampled_putts"] = int(rng.choice(3, p=probs)) + 1
        return resp

    if frontend_dist is not None and Path(frontend_dist).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=frontend_dist, html=True),
                  name="ui")
    return app
