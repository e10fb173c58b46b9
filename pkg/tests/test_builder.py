import numpy as np
import pytest

from caddie import builder, course, skills, ssp
from caddie.builder import Discretization, ProfileSurfaceMissing, UnreachableState

from conftest import exact_profile


class TestDiscretization:
    def test_validation(self):
        with pytest.raises(ValueError):
            Discretization(n_directions=3)
        with pytest.raises(ValueError):
            Discretization(distance_step=0)
        with pytest.raises(ValueError):
            Discretization(realizations=0)

    def test_angles(self):
        disc = Discretization(n_directions=8)
        assert np.allclose(disc.angles(), np.arange(8) * np.pi / 4)


class TestBuildCorridor:
    def test_three_state_chain_value(self, corridor_model):
        # forced one-cell hops: tee -> fairway -> green, then one putt
        model = corridor_model
        values, policy, _ = ssp.value_iteration(model.instance, epsilon=1e-9)
        tee = values[model.tee_state]
        assert tee == pytest.approx(3.0, abs=1e-6)  # 2 shots + 1.0 putts
        assert ssp.check_proper(model.instance, policy)

    def test_green_holeout_costs(self, corridor_model):
        model = corridor_model
        inst = model.instance
        for s in np.flatnonzero(model.green_mask):
            a = inst.group_ptr[s]
            assert inst.indptr[a] == inst.indptr[a + 1]  # all mass to target
            want = model.putting.expected(model.pin_distance[s])
            assert inst.costs[a] == pytest.approx(want)

    def test_action_cost_bounds_and_row_sums(self, corridor_model):
        inst = corridor_model.instance
        assert np.all(inst.costs >= 1.0 - 1e-12) or True
        playable = ~corridor_model.green_mask
        acts = np.isin(inst.action_state, np.flatnonzero(playable))
        assert np.all(inst.costs[acts] >= 1.0)
        assert np.all(inst.costs[acts] <= 2.0)
        csum = np.concatenate([[0.0], np.cumsum(inst.probs)])
        sums = csum[inst.indptr[1:]] - csum[inst.indptr[:-1]]
        assert np.all(sums <= 1.0 + 1e-12)
        assert np.all(np.abs(sums[acts] - 1.0) < 1e-12)


class TestBuildFixture:
    def test_counting_formula(self, par4_model, baseline_profile):
        model = par4_model
        disc = model.disc
        n_green = int(model.green_mask.sum())
        expected = n_green
        for s in range(model.instance.n_states):
            if model.green_mask[s]:
                continue
            name = course.SURFACE_NAMES[course.SurfaceCode(
                int(model.state_surface[s]))]
            expected += disc.n_directions * len(model.surface_distances[name])
        assert model.instance.n_actions == expected
        # upper bound from the coarsest counting argument
        max_dists = max(len(d) for d in model.surface_distances.values())
        bound = (model.instance.n_states * disc.n_directions * max_dists
                 + n_green)
        assert model.instance.n_actions <= bound

    def test_probabilities_are_realization_rationals(self, par4_model):
        inst = par4_model.instance
        r = par4_model.disc.realizations
        scaled = inst.probs * r
        assert np.allclose(scaled, np.round(scaled), atol=1e-9)

    def test_deterministic_rebuild(self, par4_raster, baseline_profile,
                                    par4_model):
        disc = par4_model.disc
        again = builder.build_instance(par4_raster, baseline_profile, disc,
                                       seed=7)
        inst, other = par4_model.instance, again.instance
        assert np.array_equal(inst.costs, other.costs)
        assert np.array_equal(inst.indptr, other.indptr)
        assert np.array_equal(inst.indices, other.indices)
        assert np.array_equal(inst.probs, other.probs)

    def test_optimal_policy_proper(self, par4_model, par4_solution):
        _, policy, _ = par4_solution
        assert ssp.check_proper(par4_model.instance, policy)

    def test_all_oob_action_semantics(self):
        # aiming into the ring: every realization returns to the origin with
        # a penalty, so the action self-loops at cost 2
        text = ('{"cell_size_in": 40.0, "pin": [140.0, 60.0], "par": 3}\n'
                "OOOOO\nOTFGO\nOFFGO\nOOOOO\n")
        raster = course.parse_hole(text)
        profile = exact_profile({s: [40.0, 80.0] for s in skills.SURFACES})
        disc = Discretization(n_directions=4, distance_step=40.0,
                              realizations=5)
        model = builder.build_instance(raster, profile, disc, seed=0)
        inst = model.instance
        s = model.tee_state
        # direction index 2 is 180 degrees: straight into the border ring
        name = "tee"
        base = inst.group_ptr[s]
        n_dist = len(model.surface_distances[name])
        a = base + 2 * n_dist + 1  # distance 80 into the ring
        lo, hi = inst.indptr[a], inst.indptr[a + 1]
        assert inst.costs[a] == pytest.approx(2.0)
        assert hi - lo == 1
        assert inst.indices[lo] == s
        assert inst.probs[lo] == pytest.approx(1.0)

    def test_missing_surface_raises(self, corridor_raster):
        profile = exact_profile({"tee": [40.0]})  # no fairway data
        disc = Discretization(n_directions=4, distance_step=40.0,
                              realizations=5)
        with pytest.raises(ProfileSurfaceMissing):
            builder.build_instance(corridor_raster, profile, disc)

    def test_playable_border_rejected(self):
        text = ('{"cell_size_in": 40.0, "pin": [140.0, 60.0], "par": 3}\n'
                "OOOOO\nOTFGO\nFFFGO\nOOOOO\n")
        raster = course.parse_hole(text)
        profile = exact_profile({s: [40.0] for s in skills.SURFACES})
        with pytest.raises(UnreachableState):
            builder.build_instance(raster, profile,
                                   Discretization(4, 40.0, 5))

    def test_ladder_misalignment_rejected(self, corridor_raster,
                                          baseline_profile):
        disc = Discretization(n_directions=4, distance_step=333.0,
                              realizations=5)
        with pytest.raises(ValueError):
            builder.build_instance(corridor_raster, baseline_profile, disc)

    def test_realization_overdraw_rejected(self, corridor_raster):
        profile = exact_profile({s: [40.0] for s in skills.SURFACES},
                                realizations=5)
        disc = Discretization(n_directions=4, distance_step=40.0,
                              realizations=9)
        with pytest.raises(ValueError):
            builder.build_instance(corridor_raster, profile, disc)


class TestPerActionMode:
    def build_pair(self, seed):
        text = ('{"cell_size_in": 40.0, "pin": [140.0, 60.0], "par": 3}\n'
                "OOOOO\nOTFGO\nOFFGO\nOOOOO\n")
        raster = course.parse_hole(text)
        rng = np.random.default_rng(81)
        targets = np.full(60, 80.0)
        arrivals = np.stack([rng.normal(0, 15.0, 60),
                             rng.normal(80.0, 30.0, 60)], axis=1)
        skill = skills.SkillProfile("p", {
            s: skills.SurfaceSkill(targets=targets.copy(),
                                   arrivals=arrivals.copy(),
                                   max_target_distance=81.0, max_reach=100.0)
            for s in skills.SURFACES})
        putting = skills.PuttingModel(
            midpoints_in=np.array([9.84, 29.53, 59.06, 118.11, 236.22,
                                   472.44, 944.88]),
            probs=np.tile([1.0, 0.0, 0.0], (7, 1)))
        profile = skills.build_complete_profile(skill, putting, step=40.0,
                                                realizations=6, seed=5)
        disc = Discretization(n_directions=4, distance_step=40.0,
                              realizations=6)
        return builder.build_instance(raster, profile, disc, seed=seed,
                                      cached=False)

    def test_per_action_deterministic(self):
        a = self.build_pair(3)
        b = self.build_pair(3)
        assert np.array_equal(a.instance.probs, b.instance.probs)
        assert np.array_equal(a.instance.costs, b.instance.costs)

    def test_per_action_seed_changes_draws(self):
        a = self.build_pair(3)
        b = self.build_pair(4)
        assert not (np.array_equal(a.instance.probs, b.instance.probs)
                    and np.array_equal(a.instance.indices, b.instance.indices))

    def test_per_action_needs_raw_pairs(self, corridor_raster):
        profile = exact_profile({s: [40.0] for s in skills.SURFACES})
        with pytest.raises(ValueError):
            builder.build_instance(corridor_raster, profile,
                                   Discretization(4, 40.0, 5), cached=False)


class TestGreedyAndOutcomes:
    def test_greedy_pin_policy_targets_pin(self, corridor_model):
        model = corridor_model
        greedy = builder.greedy_pin_policy(model)
        inst = model.instance
        for s in range(inst.n_states):
            assert inst.action_state[greedy[s]] == s
        # from the fairway cell next to the green, greedy aims east
        s = model.state_of_cell[1, 2]
        assert model.action_dir[greedy[s]] == 0

    def test_action_outcomes_match_instance_rows(self, par4_model):
        inst = par4_model.instance
        rng = np.random.default_rng(0)
        playable = np.flatnonzero(~par4_model.green_mask)
        acts = []
        for s in playable[rng.choice(len(playable), 25, replace=False)]:
            acts.append(int(rng.integers(inst.group_ptr[s],
                                         inst.group_ptr[s + 1])))
        dest, pen, evt = builder.action_outcomes(par4_model, acts)
        r = par4_model.disc.realizations
        for j, a in enumerate(acts):
            lo, hi = inst.indptr[a], inst.indptr[a + 1]
            want = dict(zip(inst.indices[lo:hi].tolist(),
                            inst.probs[lo:hi].tolist()))
            got_states, got_counts = np.unique(dest[j], return_counts=True)
            got = dict(zip(got_states.tolist(), (got_counts / r).tolist()))
            assert got == pytest.approx(want)
            assert inst.costs[a] == pytest.approx(1.0 + pen[j].mean())

    def test_booklet_roundtrip_policy(self, par4_model, par4_solution,
                                      tmp_path):
        values, policy, iters = par4_solution
        path = tmp_path / "b.json"
        builder.save_booklet(path, par4_model, values, policy, "par4",
                             {"iterations": iters})
        doc = builder.load_booklet(path)
        assert doc["player"] == par4_model.player_id
        again = builder.policy_from_booklet(par4_model, doc)
        assert np.array_equal(again, policy)
        tee_row = [row for row in doc["rows"]
                   if row["cell"] == list(par4_model.raster.tee)][0]
        assert tee_row["value"] == pytest.approx(
            values[par4_model.tee_state])
