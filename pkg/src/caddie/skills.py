"""Per-surface skill profiles inferred from raw shot traces.

Pipeline: raw trace rows -> canonical-frame target/destination pairs ->
outlier filtering -> local-linear bootstrap onto a regular distance ladder ->
lateral-dispersion monotonicity repair -> complete profile with a putting
model. Shots are assumed to target the pin; tee shots target the average
arrival point of the rounds played on that hole.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import units
from .geometry import DegenerateFrame, canonical_frame, to_canonical

__all__ = [
    "SURFACES",
    "ShotRecord",
    "TargetDestinationPair",
    "ExtractDiagnostics",
    "SurfaceSkill",
    "SkillProfile",
    "PuttingModel",
    "BootstrappedSurface",
    "CompleteProfile",
    "EmptyProfile",
    "TargetTooFar",
    "EmptyBucket",
    "NegativeDistance",
    "read_csv",
    "write_csv",
    "filter_window",
    "extract_pairs",
    "extract_putt_observations",
    "filter_outliers",
    "build_skill_profile",
    "bootstrap_samples",
    "bootstrap_ladder",
    "enforce_monotone_dispersion",
    "build_putting_model",
    "putt_distribution",
    "expected_putts",
    "build_complete_profile",
    "save_profile",
    "load_profile",
]

SURFACES = ("tee", "fairway", "rough", "bunker")
ALL_SURFACES = SURFACES + ("green",)

CSV_HEADER = ["player_id", "tournament_id", "round", "hole", "shot_number",
              "surface", "start_x", "start_y", "end_x", "end_y",
              "pin_x", "pin_y", "date"]


class EmptyProfile(ValueError):
    pass


class TargetTooFar(ValueError):
    pass


class EmptyBucket(ValueError):
    pass


class NegativeDistance(ValueError):
    pass


@dataclass
class ShotRecord:
    player_id: str
    tournament_id: str
    round: int
    hole: int
    shot_number: int
    surface: str
    start: np.ndarray
    end: np.ndarray
    pin: np.ndarray
    date: dt.date


@dataclass
class TargetDestinationPair:
    surface: str
    target_distance: float
    arrival: np.ndarray  # canonical frame, (lateral, longitudinal)


@dataclass
class ExtractDiagnostics:
    pairs_per_surface: dict = field(default_factory=dict)
    discarded_tee_groups: int = 0
    tee_scatter_violations: int = 0
    degenerate_records: int = 0
    green_records: int = 0


def read_csv(path) -> list[ShotRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_HEADER) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"trace CSV missing columns: {sorted(missing)}")
        for row in reader:
            if row["surface"] not in ALL_SURFACES:
                raise ValueError(f"unknown surface {row['surface']!r}")
            records.append(ShotRecord(
                player_id=row["player_id"],
                tournament_id=row["tournament_id"],
                round=int(row["round"]),
                hole=int(row["hole"]),
                shot_number=int(row["shot_number"]),
                surface=row["surface"],
                start=np.array([float(row["start_x"]), float(row["start_y"])]),
                end=np.array([float(row["end_x"]), float(row["end_y"])]),
                pin=np.array([float(row["pin_x"]), float(row["pin_y"])]),
                date=dt.date.fromisoformat(row["date"]),
            ))
    return records


def write_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow([
                r.player_id, r.tournament_id, r.round, r.hole, r.shot_number,
                r.surface, repr(float(r.start[0])), repr(float(r.start[1])),
                repr(float(r.end[0])), repr(float(r.end[1])),
                repr(float(r.pin[0])), repr(float(r.pin[1])),
                r.date.isoformat()])


def _months_before(date: dt.date, months: int) -> dt.date:
    month_index = date.year * 12 + (date.month - 1) - months
    year, month = divmod(month_index, 12)
    day = min(date.day, [31, 29 if year % 4 == 0 and (year % 100 != 0 or year % 400 == 0)
                         else 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31][month])
    return dt.date(year, month + 1, day)


def filter_window(records, reference_date: dt.date | None = None,
                  months: int = 12) -> list[ShotRecord]:
    """Keep records from the ``months`` months up to ``reference_date``.

    When no reference date is given the newest record date is used, which
    keeps the pipeline deterministic for a fixed input file.
    """
    records = list(records)
    if not records:
        return []
    if reference_date is None:
        reference_date = max(r.date for r in records)
    cutoff = _months_before(reference_date, months)
    return [r for r in records if cutoff < r.date <= reference_date]


def extract_pairs(records) -> tuple[dict[str, list[TargetDestinationPair]],
                                    ExtractDiagnostics]:
    """Canonical-frame target/destination pairs for one player's records.

    Non-tee shots assume the pin was the target. Tee shots on a given
    (tournament, hole) assume one shared target, estimated as the mean
    arrival point; groups with fewer than three rounds, or whose tee
    positions scatter more than 5 m from their centroid, are dropped and
    counted in the diagnostics.
    """
    out: dict[str, list[TargetDestinationPair]] = {s: [] for s in SURFACES}
    diag = ExtractDiagnostics()
    tee_groups: dict[tuple[str, int], list[ShotRecord]] = {}

    for rec in records:
        if rec.surface == "green":
            diag.green_records += 1
            continue
        if rec.surface == "tee":
            tee_groups.setdefault((rec.tournament_id, rec.hole), []).append(rec)
            continue
        try:
            frame = canonical_frame(rec.start, rec.pin)
        except DegenerateFrame:
            diag.degenerate_records += 1
            continue
        arrival = to_canonical(frame, rec.end)
        out[rec.surface].append(TargetDestinationPair(
            surface=rec.surface, target_distance=frame.distance, arrival=arrival))

    for key in sorted(tee_groups):
        group = tee_groups[key]
        rounds = {r.round for r in group}
        if len(rounds) <= 2:
            diag.discarded_tee_groups += 1
            continue
        starts = np.array([r.start for r in group])
        centroid = starts.mean(axis=0)
        if np.max(np.hypot(*(starts - centroid).T)) > units.TEE_SCATTER_RADIUS_IN:
            diag.tee_scatter_violations += 1
            continue
        target = np.array([r.end for r in group]).mean(axis=0)
        for rec in group:
            try:
                frame = canonical_frame(rec.start, target)
            except DegenerateFrame:
                diag.degenerate_records += 1
                continue
            out["tee"].append(TargetDestinationPair(
                surface="tee", target_distance=frame.distance,
                arrival=to_canonical(frame, rec.end)))

    diag.pairs_per_surface = {s: len(v) for s, v in out.items()}
    return out, diag


def extract_putt_observations(records) -> list[tuple[float, int]]:
    """(distance to pin, putts taken from there) for every green record.

    Counts the green shots remaining in the hole from each putt position;
    counts above three are clamped, distances beyond the model cutoff are
    dropped.
    """
    by_hole: dict[tuple, list[ShotRecord]] = {}
    for rec in records:
        if rec.surface != "green":
            continue
        by_hole.setdefault(
            (rec.player_id, rec.tournament_id, rec.round, rec.hole), []).append(rec)
    obs = []
    for key in sorted(by_hole):
        putts = sorted(by_hole[key], key=lambda r: r.shot_number)
        total = len(putts)
        for i, rec in enumerate(putts):
            d = float(np.hypot(*(rec.start - rec.pin)))
            if d > units.PUTT_MAX_DISTANCE_IN:
                continue
            obs.append((d, min(total - i, 3)))
    return obs


def filter_outliers(pairs, surface: str) -> list[TargetDestinationPair]:
    """Drop pairs whose longitudinal miss exceeds the distance-control cap.

    Fairway keeps everything inside wedge range (targets at or below 100 m)
    and caps the error at 800 in beyond it; rough, bunker and tee use a flat
    1200 in cap at every distance. Order is preserved and the filter is
    idempotent.
    """
    kept = []
    for pair in pairs:
        err = abs(pair.arrival[1] - pair.target_distance)
        if surface == "fairway":
            ok = (pair.target_distance <= units.WEDGE_RANGE_IN
                  or err <= units.FAIRWAY_ERROR_CAP_IN)
        else:
            ok = err <= units.DISTANCE_ERROR_CAP_IN
        if ok:
            kept.append(pair)
    return kept


@dataclass
class SurfaceSkill:
    targets: np.ndarray      # (n,) target distances
    arrivals: np.ndarray     # (n, 2) canonical arrivals
    max_target_distance: float
    max_reach: float


@dataclass
class SkillProfile:
    player_id: str
    surfaces: dict[str, SurfaceSkill]


def build_skill_profile(player_id: str, pairs_by_surface) -> SkillProfile:
    """Assemble cleaned pairs into per-surface arrays with reach limits.

    The targetable limit is the 95th percentile of observed target
    distances; the reach limit is the longest observed carry. The targetable
    limit never exceeds the reach limit.
    """
    surfaces = {}
    for surface, pairs in pairs_by_surface.items():
        if not pairs:
            continue
        targets = np.array([p.target_distance for p in pairs])
        arrivals = np.array([p.arrival for p in pairs])
        max_reach = float(arrivals[:, 1].max())
        max_target = float(min(np.percentile(targets, 95.0), max_reach))
        surfaces[surface] = SurfaceSkill(
            targets=targets, arrivals=arrivals,
            max_target_distance=max_target, max_reach=max_reach)
    return SkillProfile(player_id=player_id, surfaces=surfaces)


def _select_neighbors(targets: np.ndarray, d: float) -> np.ndarray:
    """Indices of pairs inside the grown selection ball around ``d``.

    The ball radius grows until it holds at least 50 pairs, capped at 30 m;
    when fewer than 10 pairs fall inside the cap the nearest 10 are taken
    regardless of radius. Pairs tied at the final radius all enter (with a
    1e-6 in slack so float noise cannot split coincident targets).
    """
    radii = np.abs(targets - d)
    order = np.argsort(radii, kind="stable")
    sorted_radii = radii[order]
    in_cap = int(np.searchsorted(sorted_radii, units.BOOTSTRAP_RADIUS_CAP_IN,
                                 side="right"))
    if in_cap < units.BOOTSTRAP_MIN_POINTS:
        return order[:units.BOOTSTRAP_MIN_POINTS]
    if in_cap >= units.BOOTSTRAP_TARGET_COUNT:
        r_star = sorted_radii[units.BOOTSTRAP_TARGET_COUNT - 1] + 1e-6
        count = int(np.searchsorted(sorted_radii, r_star, side="right"))
        return order[:max(count, units.BOOTSTRAP_TARGET_COUNT)]
    return order[:in_cap]


def bootstrap_samples(profile: SkillProfile, surface: str, d: float,
                      r: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``r`` canonical arrival samples for target distance ``d``.

    Neighbors are rescaled by d/t (local linear approximation), then lateral
    magnitudes and carries are shuffled independently with a random lateral
    sign, assuming symmetric and independent errors. Carries are clipped at
    the surface's observed reach.
    """
    skill = profile.surfaces.get(surface)
    if skill is None or len(skill.targets) == 0:
        raise EmptyProfile(f"no pairs for surface {surface!r}")
    if d > skill.max_target_distance:
        raise TargetTooFar(
            f"target {d} in exceeds max targetable "
            f"{skill.max_target_distance:.0f} in for {surface}")
    idx = _select_neighbors(skill.targets, d)
    scale = d / skill.targets[idx]
    lateral = np.abs(skill.arrivals[idx, 0]) * scale
    carry = skill.arrivals[idx, 1] * scale

    pick_x = rng.integers(0, len(idx), size=r)
    pick_y = rng.integers(0, len(idx), size=r)
    signs = rng.integers(0, 2, size=r) * 2 - 1
    samples = np.empty((r, 2))
    samples[:, 0] = signs * lateral[pick_x]
    samples[:, 1] = np.minimum(carry[pick_y], skill.max_reach)
    return samples


@dataclass
class BootstrappedSurface:
    max_target_distance: float
    max_reach: float
    distances: np.ndarray    # (k,) ladder distances
    samples: np.ndarray      # (k, r, 2) canonical samples per distance


def bootstrap_ladder(profile: SkillProfile, step: float = 100.0,
                     realizations: int = 15, seed: int = 0
                     ) -> dict[str, BootstrappedSurface]:
    """Bootstrap every surface onto the regular distance ladder.

    Ladder distances are the positive multiples of ``step`` up to the
    surface's targetable limit. Each (surface, distance) cell draws from its
    own deterministic seed so results do not depend on iteration order.
    """
    ladders = {}
    for s_idx, surface in enumerate(SURFACES):
        skill = profile.surfaces.get(surface)
        if skill is None:
            continue
        n_dist = int(math.floor(skill.max_target_distance / step))
        if n_dist == 0:
            continue
        distances = step * np.arange(1, n_dist + 1)
        samples = np.empty((n_dist, realizations, 2))
        for k, d in enumerate(distances):
            rng = np.random.default_rng(
                np.random.SeedSequence(seed, spawn_key=(s_idx, k)))
            samples[k] = bootstrap_samples(profile, surface, float(d),
                                           realizations, rng)
        ladders[surface] = BootstrappedSurface(
            max_target_distance=skill.max_target_distance,
            max_reach=skill.max_reach, distances=distances, samples=samples)
    return ladders


def enforce_monotone_dispersion(ladders: dict[str, BootstrappedSurface]
                                ) -> dict[str, BootstrappedSurface]:
    """Repair ladders so mean lateral spread grows with distance.

    Scanning each surface's ladder in increasing distance order, any drop in
    mean |lateral| is removed by rescaling that distance's lateral
    coordinates up to the previous level. Afterwards rough and bunker are
    floored by the fairway's (already repaired) spread at each common
    distance. All-zero lateral columns are left untouched.
    """
    def monotone_pass(samples: np.ndarray) -> None:
        prev = None
        for k in range(samples.shape[0]):
            mean_abs = float(np.mean(np.abs(samples[k, :, 0])))
            if mean_abs == 0.0:
                continue
            if prev is not None and mean_abs < prev:
                samples[k, :, 0] *= prev / mean_abs
                mean_abs = prev
            prev = mean_abs

    repaired: dict[str, BootstrappedSurface] = {}
    for surface, ladder in ladders.items():
        samples = ladder.samples.copy()
        monotone_pass(samples)
        repaired[surface] = BootstrappedSurface(
            max_target_distance=ladder.max_target_distance,
            max_reach=ladder.max_reach,
            distances=ladder.distances.copy(), samples=samples)

    fairway = repaired.get("fairway")
    if fairway is not None:
        fair_mean = {float(d): float(np.mean(np.abs(fairway.samples[k, :, 0])))
                     for k, d in enumerate(fairway.distances)}
        for surface in ("rough", "bunker"):
            ladder = repaired.get(surface)
            if ladder is None:
                continue
            for k, d in enumerate(ladder.distances):
                floor = fair_mean.get(float(d))
                if floor is None:
                    continue
                mean_abs = float(np.mean(np.abs(ladder.samples[k, :, 0])))
                if mean_abs == 0.0:
                    continue
                if mean_abs < floor:
                    ladder.samples[k, :, 0] *= floor / mean_abs
            # flooring can break monotonicity where one ladder outruns the
            # other; raising the tail again keeps both guarantees
            monotone_pass(ladder.samples)
    return repaired


# ---------------------------------------------------------------------------
# Putting model


@dataclass
class PuttingModel:
    """Piecewise-linear putt-count distribution over distance to the pin.

    ``probs[i]`` holds (p1, p2, p3) at ``midpoints_in[i]``; queries clamp to
    the first bucket below it and to the pooled tail bucket above it.
    """

    midpoints_in: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        self.midpoints_in = np.asarray(self.midpoints_in, dtype=np.float64)
        self.probs = np.asarray(self.probs, dtype=np.float64)
        sums = self.probs.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > 1e-9) or np.any(self.probs < -1e-12):
            raise ValueError("bucket probabilities must be a distribution")

    def distribution(self, d: float) -> np.ndarray:
        if d < 0:
            raise NegativeDistance(f"distance {d} in")
        p = np.array([np.interp(d, self.midpoints_in, self.probs[:, j])
                      for j in range(3)])
        return p / p.sum()

    def expected(self, d) -> float | np.ndarray:
        d = np.asarray(d, dtype=np.float64)
        if np.any(d < 0):
            raise NegativeDistance("negative distance to pin")
        p = np.stack([np.interp(d, self.midpoints_in, self.probs[:, j])
                      for j in range(3)])
        p = p / p.sum(axis=0)
        out = p[0] + 2.0 * p[1] + 3.0 * p[2]
        return float(out) if out.ndim == 0 else out


def putt_distribution(model: PuttingModel, d: float) -> np.ndarray:
    return model.distribution(d)


def expected_putts(model: PuttingModel, d: float) -> float:
    return model.expected(d)


def _bucket_frequencies(observations, lo: float, hi: float):
    counts = np.zeros(3)
    for dist, n in observations:
        if lo < dist <= hi or (lo == 0.0 and dist == 0.0):
            counts[min(max(int(n), 1), 3) - 1] += 1
    total = counts.sum()
    return counts, total


def build_putting_model(player_putts, pooled_putts,
                        min_player_obs: int = 30) -> PuttingModel:
    """Bucketed putt-count frequencies at doubling breakpoints.

    Player frequencies are used for the six buckets below 16 m whenever the
    player has at least ``min_player_obs`` observations there, otherwise
    pooled data fills in. The 16 m to 1280 in tail always pools all players.
    Raises :class:`EmptyBucket` when neither source covers a bucket.
    """
    breaks_in = [units.from_meters(m) for m in units.PUTT_BREAKPOINTS_M]
    edges = list(zip(breaks_in[:-1], breaks_in[1:]))
    edges.append((breaks_in[-1], units.PUTT_MAX_DISTANCE_IN))
    midpoints = np.array([units.from_meters(m) for m in units.PUTT_MIDPOINTS_M])

    probs = np.empty((7, 3))
    for i, (lo, hi) in enumerate(edges):
        pooled_counts, pooled_total = _bucket_frequencies(pooled_putts, lo, hi)
        if i < 6:
            counts, total = _bucket_frequencies(player_putts, lo, hi)
            if total < min_player_obs:
                counts, total = pooled_counts, pooled_total
        else:
            counts, total = pooled_counts, pooled_total
        if total == 0:
            raise EmptyBucket(
                f"no putt observations in ({lo:.0f}, {hi:.0f}] in")
        probs[i] = counts / total
    return PuttingModel(midpoints_in=midpoints, probs=probs)


# ---------------------------------------------------------------------------
# Complete profile artifact (the ingest output consumed by the solver)


@dataclass
class CompleteProfile:
    player_id: str
    ladder_step: float
    realizations: int
    surfaces: dict[str, BootstrappedSurface]
    putting: PuttingModel
    skill: SkillProfile | None = None  # in-memory only, not serialized


def build_complete_profile(skill: SkillProfile, putting: PuttingModel,
                           step: float = 100.0, realizations: int = 15,
                           seed: int = 0) -> CompleteProfile:
    ladders = bootstrap_ladder(skill, step=step, realizations=realizations,
                               seed=seed)
    if not ladders:
        raise EmptyProfile(f"player {skill.player_id!r} has no usable pairs")
    repaired = enforce_monotone_dispersion(ladders)
    return CompleteProfile(player_id=skill.player_id, ladder_step=step,
                           realizations=realizations, surfaces=repaired,
                           putting=putting, skill=skill)


def ingest(records, player_id: str, pooled_records=None,
           reference_date: dt.date | None = None, months: int = 12,
           step: float = 100.0, realizations: int = 15, seed: int = 0,
           min_player_obs: int = 30
           ) -> tuple[CompleteProfile, ExtractDiagnostics]:
    """Full inference pipeline for one player's records.

    Windows the data, extracts and cleans canonical pairs, bootstraps the
    distance ladder, repairs lateral dispersion and fits the putting model.
    ``pooled_records`` (defaults to ``records``) feeds the putting buckets
    that lack player data and the aggregated long-putt tail.
    """
    records = [r for r in records if r.player_id == player_id]
    if not records:
        raise EmptyProfile(f"no records for player {player_id!r}")
    windowed = filter_window(records, reference_date, months)
    pairs, diag = extract_pairs(windowed)
    clean = {s: filter_outliers(p, s) for s, p in pairs.items()}
    diag.pairs_per_surface = {s: len(v) for s, v in clean.items()}
    skill = build_skill_profile(player_id, clean)
    if pooled_records is None:
        pooled_records = records
    pooled = filter_window(list(pooled_records), reference_date, months)
    putting = build_putting_model(extract_putt_observations(windowed),
                                  extract_putt_observations(pooled),
                                  min_player_obs=min_player_obs)
    profile = build_complete_profile(skill, putting, step=step,
                                     realizations=realizations, seed=seed)
    return profile, diag


def save_profile(profile: CompleteProfile, path) -> None:
    doc = {
        "format": "caddie-profile/1",
        "player_id": profile.player_id,
        "ladder_step_in": profile.ladder_step,
        "realizations": profile.realizations,
        "surfaces": {
            surface: {
                "max_target_distance_in": ladder.max_target_distance,
                "max_reach_in": ladder.max_reach,
                "ladder": [
                    {"target_distance": float(d),
                     "samples": [[float(x), float(y)] for x, y in ladder.samples[k]]}
                    for k, d in enumerate(ladder.distances)],
            }
            for surface, ladder in profile.surfaces.items()
        },
        "putting": {
            "midpoints_in": [float(v) for v in profile.putting.midpoints_in],
            "probabilities": [[float(p) for p in row]
                              for row in profile.putting.probs],
        },
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_profile(path) -> CompleteProfile:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != "caddie-profile/1":
        raise ValueError(f"not a profile file: {path}")
    surfaces = {}
    for surface, entry in doc["surfaces"].items():
        ladder = entry["ladder"]
        distances = np.array([row["target_distance"] for row in ladder])
        samples = np.array([row["samples"] for row in ladder], dtype=np.float64)
        surfaces[surface] = BootstrappedSurface(
            max_target_distance=float(entry["max_target_distance_in"]),
            max_reach=float(entry["max_reach_in"]),
            distances=distances, samples=samples)
    putting = PuttingModel(
        midpoints_in=np.array(doc["putting"]["midpoints_in"]),
        probs=np.array(doc["putting"]["probabilities"]))
    return CompleteProfile(
        player_id=doc["player_id"], ladder_step=float(doc["ladder_step_in"]),
        realizations=int(doc["realizations"]), surfaces=surfaces,
        putting=putting)
