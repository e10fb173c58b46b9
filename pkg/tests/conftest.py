import numpy as np
import pytest

from caddie import builder, course, fixtures, skills, ssp


@pytest.fixture(scope="session")
def baseline_profile():
    return skills.load_profile(fixtures.path(fixtures.BASELINE_PROFILE))


@pytest.fixture(scope="session")
def par4_raster():
    return course.load_hole(fixtures.path(fixtures.PAR4_HOLE))


@pytest.fixture(scope="session")
def water_raster():
    return course.load_hole(fixtures.path(fixtures.WATER_HOLE))


@pytest.fixture(scope="session")
def par4_model(par4_raster, baseline_profile):
    disc = builder.Discretization(n_directions=36, distance_step=400.0,
                                  realizations=10)
    return builder.build_instance(par4_raster, baseline_profile, disc, seed=7)


@pytest.fixture(scope="session")
def par4_solution(par4_model):
    values, policy, iters = ssp.value_iteration(par4_model.instance,
                                                epsilon=1e-4)
    return values, policy, iters


CORRIDOR_TEXT = (
    '{"cell_size_in": 40.0, "pin": [180.0, 60.0], "par": 3}\n'
    "OOOOOO\n"
    "OTFGGO\n"
    "OFFGGO\n"
    "OOOOOO\n"
)


@pytest.fixture()
def corridor_raster():
    return course.parse_hole(CORRIDOR_TEXT)


def exact_profile(distances_by_surface, max_reach=1e6, putting_probs=None,
                  realizations=5):
    """Profile whose ladder samples land exactly on the target: (0, d)."""
    surfaces = {}
    for surface, dists in distances_by_surface.items():
        dists = np.asarray(dists, dtype=np.float64)
        samples = np.stack([
            np.stack([np.zeros(realizations), np.full(realizations, d)], axis=1)
            for d in dists])
        surfaces[surface] = skills.BootstrappedSurface(
            max_target_distance=float(dists.max()) + 1.0,
            max_reach=max_reach, distances=dists, samples=samples)
    if putting_probs is None:
        putting_probs = np.tile([1.0, 0.0, 0.0], (7, 1))
    putting = skills.PuttingModel(
        midpoints_in=np.array([9.84, 29.53, 59.06, 118.11, 236.22, 472.44,
                               944.88]),
        probs=np.asarray(putting_probs, dtype=np.float64))
    return skills.CompleteProfile(
        player_id="exact", ladder_step=float(dists[0]),
        realizations=realizations, surfaces=surfaces, putting=putting)


@pytest.fixture()
def corridor_model(corridor_raster):
    profile = exact_profile({s: [40.0] for s in skills.SURFACES})
    disc = builder.Discretization(n_directions=4, distance_step=40.0,
                                  realizations=5)
    return builder.build_instance(corridor_raster, profile, disc, seed=0)
