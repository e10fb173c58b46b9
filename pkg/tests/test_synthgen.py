import math

import numpy as np
import pytest

from caddie import course, fixtures, skills, synthgen


class TestTraces:
    def test_zero_ratios_hit_target_exactly(self):
        params = synthgen.SyntheticPlayerParams(
            lateral_sigma_ratio=0.0, distance_sigma_ratio=0.0)
        rng = np.random.default_rng(0)
        recs = synthgen.generate_surface_traces(params, "fairway", 50, rng)
        for r in recs:
            assert np.allclose(r.end, r.pin, atol=1e-9)

    def test_half_normal_lateral_mean(self):
        params = synthgen.SyntheticPlayerParams(
            lateral_sigma_ratio=0.05, distance_sigma_ratio=0.0)
        rng = np.random.default_rng(3)
        d = 4000.0
        recs = synthgen.generate_surface_traces(
            params, "fairway", 5000, rng, target_grid=np.array([d]))
        pairs, _ = skills.extract_pairs(recs)
        lat = np.abs([p.arrival[0] for p in pairs["fairway"]])
        want = 0.05 * d * math.sqrt(2 / math.pi)
        assert abs(lat.mean() - want) / want < 0.05

    def test_survives_cleaning_when_sigma_small(self):
        # 3 sigma below the cap: binomial tail keeps losses under 1%
        params = synthgen.SyntheticPlayerParams(
            lateral_sigma_ratio=0.02, distance_sigma_ratio=0.03)
        rng = np.random.default_rng(5)
        recs, _ = synthgen.generate_traces(params, 4000, rng)
        windowed = skills.filter_window(recs)
        pairs, diag = skills.extract_pairs(windowed)
        for surface, ps in pairs.items():
            kept = skills.filter_outliers(ps, surface)
            cap = (800.0 if surface == "fairway" else 1200.0)
            sigma = 0.03 * params.max_target[surface] * \
                params.sigma_multiplier(surface)
            assert cap / sigma > 3.0  # fixture premise
            assert len(kept) >= 0.99 * len(ps), surface

    def test_tee_groups_well_formed(self):
        params = synthgen.baseline_player()
        rng = np.random.default_rng(6)
        recs = synthgen.generate_tee_traces(params, 40, rng)
        pairs, diag = skills.extract_pairs(recs)
        assert diag.discarded_tee_groups == 0
        assert diag.tee_scatter_violations == 0
        assert len(pairs["tee"]) == 160

    def test_csv_roundtrippable(self, tmp_path):
        recs, _ = synthgen.generate_traces(synthgen.baseline_player(), 500,
                                           np.random.default_rng(7))
        path = tmp_path / "x.csv"
        skills.write_csv(recs, path)
        assert len(skills.read_csv(path)) == len(recs)


class TestHoles:
    def test_zero_hazard_corridor_accepted(self):
        spec = synthgen.HoleSpec(rows=60, cols=40, cell_size_in=40.0,
                                 n_bunkers=0, bend_amplitude=0.0)
        raster = synthgen.generate_hole(spec, np.random.default_rng(1),
                                        n_probe_directions=36)
        assert course.validate_hole(raster, n_directions=36).accepted
        assert int((raster.grid == course.SurfaceCode.WATER).sum()) == 0

    def test_deterministic_under_seed(self):
        spec = synthgen.HoleSpec(rows=60, cols=40, cell_size_in=40.0)
        a = synthgen.generate_hole(spec, np.random.default_rng(9),
                                   n_probe_directions=36)
        b = synthgen.generate_hole(spec, np.random.default_rng(9),
                                   n_probe_directions=36)
        assert course.serialize_hole(a) == course.serialize_hole(b)

    def test_par4_fixture_regenerates_from_seed(self):
        text = fixtures.path(fixtures.PAR4_HOLE).read_text()
        assert course.serialize_hole(synthgen.make_par4_fixture()) == text

    def test_water_fixture_regenerates_from_seed(self):
        text = fixtures.path(fixtures.WATER_HOLE).read_text()
        assert course.serialize_hole(synthgen.make_water_fixture()) == text

    def test_water_fixture_has_guarding_band(self, water_raster):
        lo, hi = synthgen.WATER_FIXTURE_SPEC.water_band_rows
        band = water_raster.grid[lo:hi + 1]
        playable = np.isin(band, [int(course.SurfaceCode.FAIRWAY),
                                  int(course.SurfaceCode.ROUGH),
                                  int(course.SurfaceCode.BUNKER),
                                  int(course.SurfaceCode.TEE)])
        assert not playable.any()
        assert (band == int(course.SurfaceCode.WATER)).sum() > 100

    def test_generation_failure_raises(self):
        spec = synthgen.HoleSpec(rows=60, cols=40, cell_size_in=40.0,
                                 water_band_rows=(2, 57))  # drowns everything
        with pytest.raises(synthgen.GenerationFailed):
            synthgen.generate_hole(spec, np.random.default_rng(2),
                                   max_attempts=2, n_probe_directions=18)


class TestBaselineProfile:
    def test_bundled_profile_regenerates(self, baseline_profile):
        regen = synthgen.make_baseline_profile()
        for s, ladder in regen.surfaces.items():
            other = baseline_profile.surfaces[s]
            assert np.array_equal(ladder.distances, other.distances)
            assert np.array_equal(ladder.samples, other.samples)
        assert np.array_equal(regen.putting.probs,
                              baseline_profile.putting.probs)
