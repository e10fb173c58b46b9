"""Golf strategy optimization on rasterized holes.

Infers per-surface skill profiles from shot traces, simulates 2D shots
against hole rasters, builds and exactly solves the induced stochastic
shortest path model, and produces standard golf metrics from Monte Carlo
rounds. See the README for the CLI and the demo scripts.
"""

from .builder import (Discretization, HoleModel, build_instance,
                      greedy_pin_policy)
from .course import (HoleRaster, SurfaceCode, load_hole, parse_hole,
                     save_hole, serialize_hole, validate_hole)
from .geometry import (CanonicalFrame, bresenham_cells, canonical_frame,
                       from_canonical, to_canonical)
from .metrics import (RoundMetrics, compute_metrics, leaderboard,
                      leaderboard_csv, simulate_hole, simulate_traces)
from .simulator import ShotEvent, ShotOutcome, simulate_shot
from .skills import (CompleteProfile, PuttingModel, ShotRecord, SkillProfile,
                     bootstrap_samples, build_putting_model,
                     enforce_monotone_dispersion, extract_pairs,
                     filter_outliers, ingest, load_profile, save_profile)
from .ssp import SSPInstance, check_proper, evaluate_policy, value_iteration
from .synthgen import (HoleSpec, SyntheticPlayerParams, baseline_player,
                       generate_hole, generate_traces)

__version__ = "0.1.0"
