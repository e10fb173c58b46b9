"""Length units and shared physical constants.

All internal lengths are inches. Thresholds quoted in meters are converted
once here so every module uses the same documented constants.
"""

INCHES_PER_METER = 39.3701
INCHES_PER_YARD = 36.0

# Skill inference thresholds.
WEDGE_RANGE_IN = 3937.0           # 100 m: below this, every fairway pair is kept
FAIRWAY_ERROR_CAP_IN = 800.0      # ~20 m distance-control cap beyond wedge range
DISTANCE_ERROR_CAP_IN = 1200.0    # ~30 m cap for rough, bunker and tee pairs
BOOTSTRAP_RADIUS_CAP_IN = 1181.0  # 30 m cap on the neighbor-selection radius
BOOTSTRAP_TARGET_COUNT = 50
BOOTSTRAP_MIN_POINTS = 10
TEE_SCATTER_RADIUS_IN = 5.0 * INCHES_PER_METER  # tee boxes must cluster within 5 m

# Putting model.
PUTT_MAX_DISTANCE_IN = 1280.0     # observations beyond this are discarded
PUTT_BREAKPOINTS_M = (0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0)
PUTT_MIDPOINTS_M = (0.25, 0.75, 1.5, 3.0, 6.0, 12.0, 24.0)  # last is the pooled tail

# Raster resolution bounds (0.7 m to 1.5 m per cell side).
CELL_SIZE_MIN_IN = 27.5
CELL_SIZE_MAX_IN = 59.0


def from_meters(m: float) -> float:
    return m * INCHES_PER_METER


def to_meters(inches: float) -> float:
    return inches / INCHES_PER_METER


def to_yards(inches: float) -> float:
    return inches / INCHES_PER_YARD
