"""Synthetic ground truth: parametric players and procedurally built holes.

Serves as the oracle for the inference pipeline (the generating parameters
are known, so recovered dispersions can be checked) and supplies the bundled
desk-scale fixtures. Shot errors are bivariate normal with
distance-proportional standard deviations, independent laterally and
longitudinally and symmetric about the target line.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, field

import numpy as np

from .course import HoleRaster, SurfaceCode, validate_hole
from .geometry import canonical_frame, from_canonical
from .skills import PuttingModel, ShotRecord

__all__ = [
    "SyntheticPlayerParams",
    "GenerationFailed",
    "HoleSpec",
    "baseline_player",
    "generate_surface_traces",
    "generate_tee_traces",
    "generate_putt_traces",
    "generate_traces",
    "generate_hole",
    "PAR4_FIXTURE_SPEC",
    "PAR4_FIXTURE_SEED",
    "WATER_FIXTURE_SPEC",
    "WATER_FIXTURE_SEED",
    "BASELINE_TRACES_SEED",
    "make_par4_fixture",
    "make_water_fixture",
    "make_baseline_traces",
]


class GenerationFailed(RuntimeError):
    pass


_DEFAULT_PUTTING = np.array([
    # p1, p2, p3 at bucket midpoints 0.25, 0.75, 1.5, 3, 6, 12, 24 m
    [0.99, 0.01, 0.00],
    [0.93, 0.07, 0.00],
    [0.62, 0.37, 0.01],
    [0.32, 0.66, 0.02],
    [0.13, 0.82, 0.05],
    [0.05, 0.83, 0.12],
    [0.02, 0.76, 0.22],
])


@dataclass
class SyntheticPlayerParams:
    """Ground-truth skill parameters of a generated player.

    Lateral and carry errors scale linearly with the target distance; rough
    and bunker multiply both sigmas. ``max_target`` bounds the distances the
    player attempts per surface.
    """

    player_id: str = "baseline"
    lateral_sigma_ratio: float = 0.035
    distance_sigma_ratio: float = 0.025
    rough_multiplier: float = 1.4
    bunker_multiplier: float = 1.6
    max_target: dict = field(default_factory=lambda: {
        "tee": 4400.0, "fairway": 4000.0, "rough": 3400.0, "bunker": 2600.0})
    putting_probs: np.ndarray = field(
        default_factory=lambda: _DEFAULT_PUTTING.copy())

    def sigma_multiplier(self, surface: str) -> float:
        if surface == "rough":
            return self.rough_multiplier
        if surface == "bunker":
            return self.bunker_multiplier
        return 1.0

    def putting_model(self) -> PuttingModel:
        from . import units
        midpoints = np.array([units.from_meters(m)
                              for m in units.PUTT_MIDPOINTS_M])
        return PuttingModel(midpoints_in=midpoints,
                            probs=self.putting_probs)


def baseline_player() -> SyntheticPlayerParams:
    return SyntheticPlayerParams()


def _random_date(rng, reference: dt.date, span_days: int = 300) -> dt.date:
    return reference - dt.timedelta(days=int(rng.integers(0, span_days)))


_REFERENCE_DATE = dt.date(2024, 6, 30)


def generate_surface_traces(params: SyntheticPlayerParams, surface: str,
                            n: int, rng: np.random.Generator,
                            target_grid=None,
                            reference_date: dt.date = _REFERENCE_DATE
                            ) -> list[ShotRecord]:
    """Pin-targeted shots from one surface, placed in random world frames.

    ``target_grid`` restricts target distances to the given values (uniform
    choice); by default targets are multiples of 250 in between 500 in and
    the surface's maximum, which keeps plenty of coincident-target pairs for
    the bootstrap to select.
    """
    if surface == "green":
        raise ValueError("use generate_putt_traces for putts")
    if target_grid is None:
        hi = params.max_target[surface]
        target_grid = np.arange(500.0, hi + 1.0, 250.0)
    target_grid = np.asarray(target_grid, dtype=np.float64)
    mult = params.sigma_multiplier(surface)

    records = []
    for i in range(n):
        d = float(target_grid[rng.integers(0, len(target_grid))])
        origin = rng.uniform(5000.0, 50000.0, size=2)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        pin = origin + d * np.array([math.cos(theta), math.sin(theta)])
        frame = canonical_frame(origin, pin)
        eps_x = rng.normal(0.0, params.lateral_sigma_ratio * d * mult) \
            if params.lateral_sigma_ratio > 0 else 0.0
        eps_y = rng.normal(0.0, params.distance_sigma_ratio * d * mult) \
            if params.distance_sigma_ratio > 0 else 0.0
        end = from_canonical(frame, (eps_x, d + eps_y))
        records.append(ShotRecord(
            player_id=params.player_id, tournament_id=f"SYN{i % 7}",
            round=int(rng.integers(1, 5)), hole=int(rng.integers(1, 19)),
            shot_number=2, surface=surface, start=origin, end=end, pin=pin,
            date=_random_date(rng, reference_date)))
    return records


def generate_tee_traces(params: SyntheticPlayerParams, n_groups: int,
                        rng: np.random.Generator, rounds: int = 4,
                        reference_date: dt.date = _REFERENCE_DATE
                        ) -> list[ShotRecord]:
    """Tee-shot groups sharing a fixed target across ``rounds`` rounds."""
    records = []
    hi = params.max_target["tee"]
    grid = np.arange(0.8 * hi, hi + 1.0, 100.0)
    for g in range(n_groups):
        start = rng.uniform(5000.0, 50000.0, size=2)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        d = float(grid[rng.integers(0, len(grid))])
        target = start + d * np.array([math.cos(theta), math.sin(theta)])
        frame = canonical_frame(start, target)
        date = _random_date(rng, reference_date)
        for rnd in range(1, rounds + 1):
            eps_x = rng.normal(0.0, params.lateral_sigma_ratio * d) \
                if params.lateral_sigma_ratio > 0 else 0.0
            eps_y = rng.normal(0.0, params.distance_sigma_ratio * d) \
                if params.distance_sigma_ratio > 0 else 0.0
            end = from_canonical(frame, (eps_x, d + eps_y))
            records.append(ShotRecord(
                player_id=params.player_id, tournament_id=f"TT{g}",
                round=rnd, hole=(g % 18) + 1, shot_number=1, surface="tee",
                start=start.copy(), end=end, pin=target.copy(), date=date))
    return records


def generate_putt_traces(params: SyntheticPlayerParams, n_holes: int,
                         rng: np.random.Generator,
                         reference_date: dt.date = _REFERENCE_DATE
                         ) -> list[ShotRecord]:
    """Green-only records whose putt counts follow the player's true model."""
    model = params.putting_model()
    records = []
    for h in range(n_holes):
        pin = rng.uniform(5000.0, 50000.0, size=2)
        d0 = float(rng.uniform(20.0, 1250.0))
        n_putts = int(rng.choice(3, p=model.distribution(d0))) + 1
        dists = [d0]
        if n_putts == 2:
            dists.append(float(rng.uniform(10.0, 40.0)))
        elif n_putts == 3:
            # a poor lag: leave a distance from which two putts are typical
            dists.append(float(rng.uniform(100.0, 220.0)))
            dists.append(float(rng.uniform(5.0, 20.0)))
        date = _random_date(rng, reference_date)
        # one unique (tournament, round, hole) slot per generated hole
        tournament, slot = divmod(h, 72)
        for i, d in enumerate(dists):
            theta = rng.uniform(0.0, 2.0 * math.pi)
            start = pin + d * np.array([math.cos(theta), math.sin(theta)])
            end = pin.copy() if i == len(dists) - 1 else \
                pin + dists[i + 1] * np.array([math.cos(theta), math.sin(theta)])
            records.append(ShotRecord(
                player_id=params.player_id, tournament_id=f"PT{tournament}",
                round=slot // 18 + 1, hole=slot % 18 + 1,
                shot_number=3 + i, surface="green", start=start, end=end,
                pin=pin.copy(), date=date))
    return records


def generate_traces(params: SyntheticPlayerParams, n_shots: int,
                    rng: np.random.Generator
                    ) -> tuple[list[ShotRecord], SyntheticPlayerParams]:
    """A full mixed trace: all four surfaces plus putts.

    Returns the records together with the generating parameters so callers
    can compare inferred skills against the ground truth.
    """
    n_fair = max(1, int(0.40 * n_shots))
    n_rough = max(1, int(0.15 * n_shots))
    n_bunk = max(1, int(0.10 * n_shots))
    n_tee_groups = max(1, int(0.04 * n_shots))
    n_putt_holes = max(1, int(0.12 * n_shots))
    records = []
    records += generate_surface_traces(params, "fairway", n_fair, rng)
    records += generate_surface_traces(params, "rough", n_rough, rng)
    records += generate_surface_traces(params, "bunker", n_bunk, rng)
    records += generate_tee_traces(params, n_tee_groups, rng)
    records += generate_putt_traces(params, n_putt_holes, rng)
    return records, params


# ---------------------------------------------------------------------------
# Procedural holes


@dataclass
class HoleSpec:
    rows: int = 120
    cols: int = 60
    cell_size_in: float = 55.0
    par: int = 4
    fairway_halfwidth: int = 7
    rough_halfwidth: int = 12
    green_radius: int = 5
    bend_amplitude: float = 6.0
    n_bunkers: int = 3
    water_band_rows: tuple[int, int] | None = None  # inclusive row span
    pond: bool = False


def _build_grid(spec: HoleSpec, rng: np.random.Generator) -> HoleRaster:
    rows, cols = spec.rows, spec.cols
    grid = np.full((rows, cols), SurfaceCode.TREE, dtype=np.uint8)

    tee_row = 6
    green_row = rows - 10
    phase = rng.uniform(0.0, 2.0 * math.pi)
    freq = rng.uniform(1.0, 2.0) * math.pi / rows
    rr = np.arange(rows)
    center = cols / 2.0 + spec.bend_amplitude * np.sin(rr * freq + phase)
    center[:tee_row + 3] = cols / 2.0
    center[green_row - 6:] = center[green_row - 6]

    cc = np.arange(cols)
    for r in range(2, rows - 2):
        off = np.abs(cc - center[r])
        grid[r, off <= spec.rough_halfwidth] = SurfaceCode.ROUGH
        if tee_row <= r <= green_row:
            grid[r, off <= spec.fairway_halfwidth] = SurfaceCode.FAIRWAY

    gc = int(round(center[green_row]))
    for r in range(rows):
        for c in range(cols):
            if (r - green_row) ** 2 + (c - gc) ** 2 <= spec.green_radius ** 2:
                grid[r, c] = SurfaceCode.GREEN

    for _ in range(spec.n_bunkers):
        br = int(rng.integers(green_row - 14, green_row + 2))
        bc = int(np.clip(int(center[br]) + int(rng.integers(-9, 10)), 2, cols - 3))
        rad = int(rng.integers(1, 3))
        for r in range(max(2, br - rad), min(rows - 2, br + rad + 1)):
            for c in range(max(2, bc - rad), min(cols - 2, bc + rad + 1)):
                if (r - br) ** 2 + (c - bc) ** 2 <= rad ** 2 and \
                        grid[r, c] != SurfaceCode.GREEN:
                    grid[r, c] = SurfaceCode.BUNKER

    if spec.water_band_rows is not None:
        lo, hi = spec.water_band_rows
        for r in range(lo, hi + 1):
            playable = grid[r] != SurfaceCode.TREE
            grid[r, playable] = SurfaceCode.WATER
    elif spec.pond:
        pr = int((tee_row + green_row) * 0.62)
        pc = int(center[pr]) + int(rng.integers(-4, 5))
        rad = int(rng.integers(3, 5))
        for r in range(pr - rad, pr + rad + 1):
            for c in range(max(2, pc - rad), min(cols - 2, pc + rad + 1)):
                if (r - pr) ** 2 + (c - pc) ** 2 <= rad ** 2 and \
                        grid[r, c] != SurfaceCode.GREEN:
                    grid[r, c] = SurfaceCode.WATER

    grid[0, :] = grid[-1, :] = SurfaceCode.OOB
    grid[:, 0] = grid[:, -1] = SurfaceCode.OOB
    grid[1, :] = grid[-2, :] = SurfaceCode.OOB
    grid[:, 1] = grid[:, -2] = SurfaceCode.OOB

    tee_col = int(round(center[tee_row]))
    grid[tee_row, tee_col] = SurfaceCode.TEE

    pin = np.array([(gc + 0.5) * spec.cell_size_in,
                    (green_row + 0.5) * spec.cell_size_in])
    return HoleRaster(grid=grid, cell_size=spec.cell_size_in, pin=pin,
                      par=spec.par, tee=(tee_row, tee_col))


def generate_hole(spec: HoleSpec, rng: np.random.Generator,
                  max_attempts: int = 20, n_probe_directions: int = 60
                  ) -> HoleRaster:
    """Build a validated hole; retries with fresh randomness on failure."""
    for _ in range(max_attempts):
        raster = _build_grid(spec, rng)
        report = validate_hole(raster, n_directions=n_probe_directions)
        if report.accepted:
            return raster
    raise GenerationFailed(
        f"no valid raster after {max_attempts} attempts")


# Bundled fixtures regenerate exactly from these recorded seeds.
PAR4_FIXTURE_SPEC = HoleSpec(rows=120, cols=60, cell_size_in=55.0, par=4,
                             n_bunkers=3, pond=False)
PAR4_FIXTURE_SEED = 20240401

WATER_FIXTURE_SPEC = HoleSpec(rows=120, cols=40, cell_size_in=50.0, par=4,
                              fairway_halfwidth=6, rough_halfwidth=10,
                              bend_amplitude=0.0, n_bunkers=0,
                              green_radius=6, water_band_rows=(78, 94))
WATER_FIXTURE_SEED = 20240402

BASELINE_TRACES_SEED = 20240403


def make_par4_fixture() -> HoleRaster:
    rng = np.random.default_rng(PAR4_FIXTURE_SEED)
    return generate_hole(PAR4_FIXTURE_SPEC, rng)


def make_water_fixture() -> HoleRaster:
    rng = np.random.default_rng(WATER_FIXTURE_SEED)
    return generate_hole(WATER_FIXTURE_SPEC, rng)


def make_baseline_traces(n_shots: int = 12000) -> list[ShotRecord]:
    rng = np.random.default_rng(BASELINE_TRACES_SEED)
    records, _ = generate_traces(baseline_player(), n_shots, rng)
    return records


BASELINE_PROFILE_SEED = 20240404


def make_baseline_profile(realizations: int = 15):
    """The bundled player profile, regenerated from its recorded seeds."""
    from .skills import ingest
    records = make_baseline_traces()
    profile, _ = ingest(records, "baseline", realizations=realizations,
                        seed=BASELINE_PROFILE_SEED)
    return profile
