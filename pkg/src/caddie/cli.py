"""Command line pipeline: ingest, solve, simulate, serve.

Every command is deterministic for fixed inputs and seed, producing
byte-identical artifacts on reruns. Exit codes: 0 success, 1 user error
(bad inputs, failed validation), 2 internal error.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import builder, course, metrics, skills, ssp

USER_ERRORS = (
    ValueError, LookupError, OSError, json.JSONDecodeError,
    course.ParseError, course.InvariantViolation,
    skills.EmptyProfile, skills.EmptyBucket, skills.TargetTooFar,
    builder.UnreachableState, builder.ProfileSurfaceMissing,
)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON file with defaults for the flags below")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--directions", type=int, default=None,
                        help="number of aim directions (default 180)")
    parser.add_argument("--distance-step", type=float, default=None,
                        help="target distance step in inches (default 100)")
    parser.add_argument("--realizations", type=int, default=None,
                        help="realizations per action (default 15)")
    parser.add_argument("--epsilon", type=float, default=None,
                        help="value iteration tolerance (default 1e-4)")
    parser.add_argument("--months", type=int, default=None,
                        help="data window in months (default 12)")


_DEFAULTS = {"seed": 0, "directions": 180, "distance_step": 100.0,
             "realizations": 15, "epsilon": 1e-4, "months": 12}


def _settings(args) -> dict:
    """Merge CLI flags over the config file over built-in defaults."""
    merged = dict(_DEFAULTS)
    if args.config is not None:
        with open(args.config) as fh:
            file_conf = json.load(fh)
        unknown = set(file_conf) - set(_DEFAULTS) - {"reference_date"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_conf)
    for key in _DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    return merged


def cmd_ingest(args) -> int:
    conf = _settings(args)
    records = skills.read_csv(args.csv)
    if not records:
        raise skills.EmptyProfile(f"{args.csv} contains no records")
    players = sorted({r.player_id for r in records})
    if args.player is not None:
        if args.player not in players:
            raise ValueError(f"player {args.player!r} not in {args.csv}")
        players = [args.player]
    ref_text = args.reference_date or conf.get("reference_date")
    reference = dt.date.fromisoformat(ref_text) if ref_text else None
    args.out.mkdir(parents=True, exist_ok=True)
    for player in players:
        profile, diag = skills.ingest(
            records, player, pooled_records=records,
            reference_date=reference, months=conf["months"],
            step=conf["distance_step"] if args.ladder_step is None
            else args.ladder_step,
            realizations=conf["realizations"], seed=conf["seed"])
        out = args.out / f"{player}.json"
        skills.save_profile(profile, out)
        print(f"{player}: wrote {out}")
        print(f"  pairs kept {diag.pairs_per_surface}")
        print(f"  tee groups discarded {diag.discarded_tee_groups} "
              f"(scatter {diag.tee_scatter_violations}), "
              f"degenerate {diag.degenerate_records}, "
              f"green records {diag.green_records}")
    return 0


def cmd_solve(args) -> int:
    conf = _settings(args)
    raster = course.load_hole(args.hole)
    report = course.validate_hole(raster)
    if not report.accepted:
        detail = (f"unreachable={report.unreachable[:5]} "
                  f"border={report.border_violations[:5]} "
                  f"tee_ok={report.tee_reaches_green} notes={report.notes}")
        raise ValueError(f"hole {args.hole} failed validation: {detail}")
    profile = skills.load_profile(args.profile)
    disc = builder.Discretization(
        n_directions=conf["directions"],
        distance_step=conf["distance_step"],
        realizations=conf["realizations"])
    t0 = time.perf_counter()
    model = builder.build_instance(raster, profile, disc, seed=conf["seed"],
                                   cached=not args.per_action)
    build_s = time.perf_counter() - t0
    t0 = time.perf_counter()
    values, policy, iters = ssp.value_iteration(
        model.instance, epsilon=conf["epsilon"])
    solve_s = time.perf_counter() - t0
    residual = float(np.max(np.abs(
        values - np.minimum.reduceat(
            model.instance.costs + model.instance.P @ values,
            model.instance.group_ptr[:-1]))))
    stats = {"iterations": iters, "residual": residual,
             "epsilon": conf["epsilon"]}
    hole_id = Path(args.hole).stem
    builder.save_booklet(args.out, model, values, policy, hole_id, stats)
    print(f"states {model.instance.n_states}, actions "
          f"{model.instance.n_actions}, iterations {iters}")
    print(f"build {build_s:.2f}s, solve {solve_s:.2f}s, "
          f"residual {residual:.2e}")
    print(f"tee value {values[model.tee_state]:.4f} strokes -> {args.out}")
    return 0


def _rebuild_from_booklet(hole_path, profile_path, doc):
    raster = course.load_hole(hole_path)
    profile = skills.load_profile(profile_path)
    disc = builder.Discretization(
        n_directions=doc["disc"]["n_directions"],
        distance_step=doc["disc"]["distance_step"],
        realizations=doc["disc"]["realizations"])
    model = builder.build_instance(raster, profile, disc, seed=doc["seed"],
                                   cached=doc["cached"])
    return model, builder.policy_from_booklet(model, doc)


def cmd_simulate(args) -> int:
    conf = _settings(args)
    if args.n <= 0:
        raise ValueError("need a positive number of holes to simulate")
    doc = builder.load_booklet(args.policy)
    model, policy = _rebuild_from_booklet(args.hole, args.profile, doc)
    rng = np.random.default_rng(conf["seed"])
    traces = metrics.simulate_traces(model, policy, args.n, rng)
    table = metrics.leaderboard({doc["player"]: metrics.compute_metrics(
        traces, model)})
    csv_text = metrics.leaderboard_csv(table)
    if args.out is not None:
        Path(args.out).write_text(csv_text)
        print(f"wrote {args.out}")
    print(csv_text, end="")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ArtifactStore, create_app

    store = ArtifactStore(holes_dir=args.holes, profiles_dir=args.profiles,
                          policies_dir=args.policies)
    app = create_app(store, frontend_dist=args.frontend)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        raise ValueError(f"cannot bind {args.host}:{args.port}: {exc}") from exc
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caddie",
        description="Skill inference, hole solving and round simulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="shot trace CSV -> profile JSON files")
    p.add_argument("csv", type=Path)
    p.add_argument("--out", type=Path, required=True,
                   help="output directory, one <player>.json per player")
    p.add_argument("--player", default=None,
                   help="restrict to one player id")
    p.add_argument("--reference-date", default=None,
                   help="window end, ISO date; default: newest record")
    p.add_argument("--ladder-step", type=float, default=None,
                   help="profile ladder step in inches (default 100)")
    _add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("solve", help="hole + profile -> optimal booklet JSON")
    p.add_argument("hole", type=Path)
    p.add_argument("profile", type=Path)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--per-action", action="store_true",
                   help="draw fresh realizations per action instead of the "
                        "shared per-distance ladder samples")
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("simulate",
                       help="Monte Carlo rounds under a solved booklet")
    p.add_argument("hole", type=Path)
    p.add_argument("profile", type=Path)
    p.add_argument("policy", type=Path, help="booklet JSON from solve")
    p.add_argument("-n", type=int, required=True, help="number of holes")
    p.add_argument("--out", type=Path, default=None, help="metrics CSV path")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="HTTP service for the caddie UI")
    p.add_argument("--holes", type=Path, required=True,
                   help="directory of .txt hole files")
    p.add_argument("--profiles", type=Path, required=True,
                   help="directory of <player>.json profiles")
    p.add_argument("--policies", type=Path, required=True,
                   help="directory of <player>/<hole>.json booklets")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8321)
    p.add_argument("--frontend", type=Path, default=None,
                   help="optional built UI directory to serve at /")
    _add_common(p)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - report and exit 2
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
