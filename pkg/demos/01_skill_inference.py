"""Infer a player's skill profile from raw shot traces.

Walks the full inference pipeline on synthetic ground truth: extract
canonical target/destination pairs, drop distance-control outliers,
bootstrap a complete per-surface profile onto the 100-inch ladder, and fit
the putting model. Because the generator's dispersion parameters are known,
the recovered lateral spread can be compared against the truth.

Writes plots into demos/output/.
"""

import math
from pathlib import Path

import numpy as np

from caddie import skills, synthgen

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def main():
    params = synthgen.baseline_player()
    rng = np.random.default_rng(2024)
    records, truth = synthgen.generate_traces(params, 12_000, rng)
    print(f"generated {len(records)} trace records for "
          f"player {truth.player_id!r}")

    windowed = skills.filter_window(records)
    pairs, diag = skills.extract_pairs(windowed)
    print(f"extracted pairs: { {s: len(p) for s, p in pairs.items()} }")
    print(f"tee groups discarded: {diag.discarded_tee_groups}, "
          f"green records: {diag.green_records}")

    cleaned = {s: skills.filter_outliers(p, s) for s, p in pairs.items()}
    for s in skills.SURFACES:
        dropped = len(pairs[s]) - len(cleaned[s])
        print(f"  {s:8s}: kept {len(cleaned[s]):5d}, dropped {dropped}")

    profile, _ = skills.ingest(records, truth.player_id, realizations=15,
                               seed=1)
    print("\nbootstrapped ladder (per surface):")
    for s, ladder in profile.surfaces.items():
        print(f"  {s:8s}: {len(ladder.distances)} distances up to "
              f"{ladder.distances[-1]:.0f} in, "
              f"max reach {ladder.max_reach:.0f} in")

    # recovered lateral dispersion vs the generator's ground truth
    print("\nlateral dispersion, recovered vs truth (fairway):")
    coeff = truth.lateral_sigma_ratio * math.sqrt(2 / math.pi)
    for d in (1000.0, 2000.0, 3000.0):
        samples = skills.bootstrap_samples(
            profile.skill, "fairway", d, 20_000, np.random.default_rng(7))
        got = np.mean(np.abs(samples[:, 0]))
        print(f"  d={d:5.0f} in: mean|x| = {got:6.1f} in "
              f"(truth {coeff * d:6.1f} in)")

    print("\nputting model (p1/p2/p3 by bucket midpoint):")
    for mid, row in zip(profile.putting.midpoints_in, profile.putting.probs):
        print(f"  {mid:7.1f} in: {row[0]:.2f} / {row[1]:.2f} / {row[2]:.2f}"
              f"   -> {profile.putting.expected(float(mid)):.2f} expected")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("\nmatplotlib not available; skipping plots")
        return

    fig, axes = plt.subplots(1, 2, figsize=(11, 5), sharey=True)
    for ax, (title, data) in zip(
            axes, [("original", pairs["fairway"]),
                   ("cleaned", cleaned["fairway"])]):
        for p in data[:1500]:
            ax.plot([0, p.arrival[0]], [p.target_distance, p.arrival[1]],
                    lw=0.3, color="tab:blue", alpha=0.4)
        ax.set_title(f"fairway target/destination pairs ({title})")
        ax.set_xlabel("lateral (in)")
    axes[0].set_ylabel("longitudinal (in)")
    fig.tight_layout()
    fig.savefig(OUT / "01_pairs.png", dpi=110)

    fig, ax = plt.subplots(figsize=(7, 6))
    ladder = profile.surfaces["fairway"]
    for k, d in enumerate(ladder.distances):
        ax.scatter(ladder.samples[k, :, 0], ladder.samples[k, :, 1], s=4)
    ax.set_title("bootstrapped fairway profile (15 samples per 100 in)")
    ax.set_xlabel("lateral (in)")
    ax.set_ylabel("carry (in)")
    fig.tight_layout()
    fig.savefig(OUT / "01_ladder.png", dpi=110)

    fig, ax = plt.subplots(figsize=(7, 4))
    dd = np.linspace(0, 1280, 300)
    ax.plot(dd, [profile.putting.expected(float(x)) for x in dd])
    ax.set_xlabel("distance to pin (in)")
    ax.set_ylabel("expected putts")
    ax.set_title("putting model")
    fig.tight_layout()
    fig.savefig(OUT / "01_putting.png", dpi=110)
    print(f"\nplots saved under {OUT}/")


if __name__ == "__main__":
    main()
