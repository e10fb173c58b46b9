"""Simulate single shots against a hole raster.

Loads the bundled water hole and traces a few aimed shots, showing the
obstacle truncation rules in action: a clean carry, a splash with its
entry-point drop, and an out-of-bounds return. Renders the trails in ASCII.
"""

import numpy as np

from caddie import course, fixtures, geometry, simulator

TRAIL = "*"
BALL = "@"


def render(raster, cells, ball):
    art = [list(line) for line in
           course.serialize_hole(raster).splitlines()[1:]]
    for r, c in cells:
        art[r][c] = TRAIL
    art[ball[0]][ball[1]] = BALL
    # rows are printed north-up: highest y first
    return "\n".join("".join(row) for row in reversed(art))


def shoot(raster, start, target_cell, spread=(0.0, 0.0), label=""):
    frame = geometry.canonical_frame(raster.cell_center(start),
                                     raster.cell_center(target_cell))
    sample = (spread[0], frame.distance + spread[1])
    outcome = simulator.simulate_shot(raster, start, frame, sample)
    path = geometry.bresenham_cells(start, outcome.final)
    print(f"--- {label}")
    print(f"aimed {frame.distance:.0f} in at cell {target_cell}: "
          f"event {outcome.event.name}, penalty {outcome.penalty}, "
          f"rest {outcome.final}"
          + (f", {outcome.distance_to_pin:.0f} in from the pin"
             if outcome.landed_on_green else ""))
    print(render(raster, [tuple(c) for c in path], outcome.final))
    print()
    return outcome


def main():
    raster = course.load_hole(fixtures.path(fixtures.WATER_HOLE))
    tee = raster.tee
    print(f"water hole: {raster.rows}x{raster.cols} cells of "
          f"{raster.cell_size:.0f} in, par {raster.par}, tee {tee}\n")

    # lay up short of the water band
    shoot(raster, tee, (70, tee[1]), label="lay up short of the water")
    # try to reach the green from the tee: the band swallows it
    shoot(raster, tee, (96, tee[1]), label="too greedy: into the water")
    # a wild slice into the trees on the right
    shoot(raster, tee, (40, raster.cols - 3), label="sliced toward the ring")
    # from the layup zone, carry the band onto the green
    green = raster.point_cell(raster.pin)
    shoot(raster, (70, tee[1]), green, label="carry the band to the pin")


if __name__ == "__main__":
    main()
