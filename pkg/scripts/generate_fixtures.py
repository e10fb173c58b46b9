"""Regenerate the bundled fixtures from their recorded seeds.

Writes into src/caddie/fixtures/; the test suite asserts the committed
files match what this script produces.
"""

from pathlib import Path

from caddie import course, skills, synthgen

OUT = Path(__file__).resolve().parent.parent / "src" / "caddie" / "fixtures"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    course.save_hole(synthgen.make_par4_fixture(), OUT / "hole_par4.txt")
    course.save_hole(synthgen.make_water_fixture(), OUT / "hole_water.txt")
    skills.save_profile(synthgen.make_baseline_profile(),
                        OUT / "player_baseline.json")
    for name in ("hole_par4.txt", "hole_water.txt", "player_baseline.json"):
        print(f"wrote {OUT / name}")


if __name__ == "__main__":
    main()
