"""Build the service artifacts the UI integration tests run against.

Creates frontend/.artifacts/ with a deterministic corridor hole, the
bundled baseline profile, and a solved booklet. Skips work already done.
"""

import shutil
import sys
from pathlib import Path

import numpy as np

from caddie import cli, course, fixtures, synthgen

ROOT = Path(__file__).resolve().parent.parent / ".artifacts"
CORRIDOR_SEED = 20240405


def main() -> int:
    holes = ROOT / "holes"
    profiles = ROOT / "profiles"
    policies = ROOT / "policies" / "baseline"
    for d in (holes, profiles, policies):
        d.mkdir(parents=True, exist_ok=True)

    hole_path = holes / "corridor.txt"
    if not hole_path.exists():
        spec = synthgen.HoleSpec(rows=120, cols=40, cell_size_in=50.0,
                                 bend_amplitude=0.0, n_bunkers=0)
        raster = synthgen.generate_hole(spec,
                                        np.random.default_rng(CORRIDOR_SEED),
                                        n_probe_directions=60)
        course.save_hole(raster, hole_path)

    profile_path = profiles / "baseline.json"
    if not profile_path.exists():
        shutil.copy(fixtures.path(fixtures.BASELINE_PROFILE), profile_path)

    booklet_path = policies / "corridor.json"
    if not booklet_path.exists():
        rc = cli.main(["solve", str(hole_path), str(profile_path),
                       "--out", str(booklet_path),
                       "--directions", "36", "--distance-step", "400",
                       "--realizations", "10", "--seed", "7"])
        if rc != 0:
            return rc
    print(ROOT)
    return 0


if __name__ == "__main__":
    sys.exit(main())
