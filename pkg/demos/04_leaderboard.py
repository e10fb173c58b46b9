"""Monte Carlo rounds and the simulated leaderboard.

Builds three synthetic players of widening shot dispersion, solves the
water-guarded hole for each, simulates thousands of holes under the optimal
policies, and prints the standard metrics table: the tighter player tops
the board.
"""

import numpy as np

from caddie import builder, course, fixtures, metrics, skills, ssp, synthgen

DISC = builder.Discretization(n_directions=24, distance_step=400.0,
                              realizations=10)
N_HOLES = 4000


def main():
    raster = course.load_hole(fixtures.path(fixtures.WATER_HOLE))
    shared_putting = synthgen.baseline_player().putting_model()

    boards = {}
    for i, lateral in enumerate((0.025, 0.05, 0.09)):
        params = synthgen.SyntheticPlayerParams(
            player_id=f"player {chr(65 + i)}",
            lateral_sigma_ratio=lateral,
            distance_sigma_ratio=0.02 + lateral / 2)
        rng = np.random.default_rng(31 + i)
        records, _ = synthgen.generate_traces(params, 8000, rng)
        profile, _ = skills.ingest(records, params.player_id,
                                   realizations=10, seed=i)
        profile.putting = shared_putting  # same short game for all three

        model = builder.build_instance(raster, profile, DISC, seed=i)
        values, policy, _ = ssp.value_iteration(model.instance, epsilon=1e-4)
        traces = metrics.simulate_traces(model, policy, N_HOLES,
                                         np.random.default_rng(1000 + i))
        boards[params.player_id] = metrics.compute_metrics(traces, model)
        print(f"{params.player_id}: lateral ratio {lateral:.3f}, "
              f"policy value {values[model.tee_state]:.3f}, "
              f"simulated mean {boards[params.player_id].score:.3f}")

    print(f"\nleaderboard over {N_HOLES} holes each:")
    table = metrics.leaderboard(boards)
    print(metrics.leaderboard_csv(table))


if __name__ == "__main__":
    main()
