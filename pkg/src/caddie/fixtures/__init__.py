"""Bundled desk-scale fixtures: two holes and one synthetic player profile.

All three regenerate exactly from recorded seeds (see
``scripts/generate_fixtures.py``); the copies here make the CLI, demos and
service usable without running the generator.
"""

from importlib import resources
from pathlib import Path


def path(name: str) -> Path:
    """Filesystem path of a bundled fixture file."""
    return Path(resources.files(__package__) / name)


PAR4_HOLE = "hole_par4.txt"
WATER_HOLE = "hole_water.txt"
BASELINE_PROFILE = "player_baseline.json"
