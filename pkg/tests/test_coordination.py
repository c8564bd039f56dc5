"""Target-selection costs, hysteresis, endgame bidding, and the exact
agreement between scalar contract operations and vectorized surfaces."""
import itertools

import numpy as np
import pytest

from hexplore.agent import new_drone
from hexplore.coordination import (
    COMMITMENT_WINDOW, ApproachTable, CostParams, Strategy,
    UnexploredWeights, approach_block_counts, endgame_bidding,
    expand_blocks, not_visited_block_counts, pso_cost_surface, pso_target,
    rnn_cost, rnn_cost_surface, select_target, weighted_rnn_cost,
)
from hexplore.grid import GridKind, heuristic_distance, heuristic_field
from hexplore.localmap import CellState
from hexplore.pathfind import plan_field

from conftest import empty_world


def make_drone(pos=(0, 0), kind=GridKind.QUAD, dims=(12, 12), sub=(4, 4)):
    world = empty_world(dims[0], dims[1], kind, sub=sub)
    return new_drone(0, pos, world)


def test_strategy_labels_round_trip():
    for s in Strategy:
        assert Strategy.from_label(s.value) is s
    with pytest.raises(ValueError):
        Strategy.from_label("RRT")


def test_strategy_properties():
    assert Strategy.PSO.grid_kind is GridKind.QUAD
    assert Strategy.HRNN_SRC.grid_kind is GridKind.HEX
    assert not Strategy.QRNN.uses_src
    assert Strategy.WHRNN_SRC.uses_src and Strategy.WHRNN_SRC.weighted
    assert not Strategy.HRNN_SRC.weighted


def test_rnn_cost_zero_approach_reduces_to_g_plus_h():
    d = make_drone((0, 0))
    cost = rnn_cost(d, (2, 3), 5, ApproachTable(), CostParams(alpha=2.0))
    assert cost == 5 + 5


def test_rnn_cost_hand_example():
    # g=3, h=2, alpha=2, S=2 -> 9.
    d = make_drone((0, 0))
    table = ApproachTable({(0, 0): 2})
    cost = rnn_cost(d, (1, 1), 3, table, CostParams(alpha=2.0))
    assert cost == 9.0


def test_rnn_cost_self_exclusion():
    d = make_drone((0, 0))
    d.target_subarea = (0, 0)
    table = ApproachTable({(0, 0): 2})
    # One of the two approaching drones is this one; only the other counts.
    cost = rnn_cost(d, (1, 1), 3, table, CostParams(alpha=2.0))
    assert cost == 3 + 2 + 2.0


def test_weighted_rnn_cost_hand_example():
    # g=3, h=2, alpha=2, S=1, beta=4, W=8, area=16 -> 3+2+2-2 = 5.
    d = make_drone((0, 0))
    table = ApproachTable({(0, 0): 1})
    weights = UnexploredWeights({(0, 0): 8})
    cost = weighted_rnn_cost(d, (1, 1), 3, table, weights,
                             CostParams(alpha=2.0, beta=4.0), subarea_area=16)
    assert cost == 5.0


def test_rnn_cost_alpha_slope():
    d = make_drone((0, 0))
    p = CostParams(alpha=3.0)
    base = rnn_cost(d, (1, 1), 2, ApproachTable({(0, 0): 1}), p)
    bumped = rnn_cost(d, (1, 1), 2, ApproachTable({(0, 0): 2}), p)
    assert bumped - base == p.alpha


def test_costs_match_bruteforce_on_random_inputs(rng):
    """1000 random evaluations against an independent recomputation."""
    for i in range(1000):
        kind = GridKind.QUAD if i % 2 == 0 else GridKind.HEX
        d = make_drone(tuple(rng.integers(0, 12, size=2)), kind)
        u = tuple(int(x) for x in rng.integers(0, 12, size=2))
        g = int(rng.integers(0, 30))
        p = CostParams(alpha=float(rng.integers(1, 10)),
                       beta=float(rng.integers(1, 10)))
        counts = {
            (int(sr), int(sc)): int(rng.integers(0, 5))
            for sr in range(3) for sc in range(3)
        }
        w = {
            (int(sr), int(sc)): int(rng.integers(0, 17))
            for sr in range(3) for sc in range(3)
        }
        if rng.random() < 0.5:
            d.target_subarea = (int(rng.integers(0, 3)), int(rng.integers(0, 3)))
        sub = (u[0] // 4, u[1] // 4)
        s = counts[sub]
        if d.target_subarea == sub:
            s = max(0, s - 1)
        h = heuristic_distance(d.pos, u, kind)
        expected = (g + h) + p.alpha * s
        got = rnn_cost(d, u, g, ApproachTable(dict(counts)), p)
        assert got == expected
        expected_w = expected - p.beta * (w[sub] / 16)
        got_w = weighted_rnn_cost(d, u, g, ApproachTable(dict(counts)),
                                  UnexploredWeights(dict(w)), p, 16)
        assert got_w == expected_w


def test_select_target_single_candidate():
    d = make_drone((0, 0))
    got = select_target(d, [((8, 8), 40)], ApproachTable(),
                        UnexploredWeights(), Strategy.QRNN, CostParams())
    assert got == ((8, 8), (2, 2))


def test_select_target_empty_candidates():
    d = make_drone((0, 0))
    assert select_target(d, [], ApproachTable(), UnexploredWeights(),
                         Strategy.QRNN, CostParams()) is None


def test_select_target_row_major_tiebreak():
    d = make_drone((0, 0))
    # Equal g+h: (2,3) and (3,2) are both at Manhattan distance 5.
    cands = [((3, 2), 5), ((2, 3), 5)]
    got = select_target(d, cands, ApproachTable(), UnexploredWeights(),
                        Strategy.QRNN, CostParams())
    assert got[0] == (2, 3)


def test_select_target_hysteresis_restricts_to_held_subarea():
    d = make_drone((0, 0))
    d.target_subarea = (2, 2)
    d.commitment_age = COMMITMENT_WINDOW - 1
    cands = [((0, 1), 1), ((8, 8), 16)]
    got = select_target(d, cands, ApproachTable(), UnexploredWeights(),
                        Strategy.QRNN, CostParams())
    assert got == ((8, 8), (2, 2))
    # Once the window expires the cheaper candidate wins again.
    d.commitment_age = COMMITMENT_WINDOW
    got = select_target(d, cands, ApproachTable(), UnexploredWeights(),
                        Strategy.QRNN, CostParams())
    assert got == ((0, 1), (0, 0))


def test_select_target_hysteresis_needs_reachable_candidate():
    d = make_drone((0, 0))
    d.target_subarea = (2, 2)
    d.commitment_age = 0
    # No candidate left in the held subarea: restriction is dropped.
    got = select_target(d, [((0, 1), 1)], ApproachTable(), UnexploredWeights(),
                        Strategy.QRNN, CostParams())
    assert got == ((0, 1), (0, 0))


def test_pso_target_no_companions_is_nearest():
    d = make_drone((0, 0))
    got = pso_target(d, [((0, 2), 2), ((5, 5), 10)], {0: (0, 0)}, CostParams())
    assert got[0] == (0, 2)


def test_pso_target_companion_in_box_penalizes():
    d = make_drone((0, 0))
    p = CostParams(alpha=10.0)
    # Companion at (0,1) sits inside the box toward (0,2) but not (2,0).
    positions = {0: (0, 0), 1: (0, 1)}
    got = pso_target(d, [((0, 2), 2), ((2, 0), 2)], positions, p)
    assert got[0] == (2, 0)


def test_endgame_bidding_basic():
    assert endgame_bidding([0], [(1, 1)], {(0, (1, 1)): 4}) == {0: (1, 1)}
    got = endgame_bidding([0, 1], [(1, 1)],
                          {(0, (1, 1)): 7, (1, (1, 1)): 4})
    assert got == {1: (1, 1)}


def test_endgame_bidding_tie_breaks():
    got = endgame_bidding([1, 0], [(1, 1)], {(0, (1, 1)): 4, (1, (1, 1)): 4})
    assert got == {0: (1, 1)}  # lower drone id wins ties
    got = endgame_bidding([0], [(2, 2), (1, 1)],
                          {(0, (1, 1)): 4, (0, (2, 2)): 4})
    assert got == {0: (1, 1)}  # row-major cell wins ties


def test_endgame_bidding_unreachable_cell_left_out():
    got = endgame_bidding([0, 1], [(1, 1), (2, 2)],
                          {(0, (1, 1)): 3, (1, (1, 1)): 5})
    assert got == {0: (1, 1)}


def test_endgame_bidding_near_optimal(rng):
    """Greedy vs exhaustive assignment on 100 random 3x3 instances.

    Instances use genuine path-style (metric) costs: drone and cell
    positions drawn on a grid, cost = Manhattan distance.  With
    unstructured random cost matrices greedy has no such bound.
    """
    optimal_hits = 0
    for _ in range(100):
        dpos = rng.integers(0, 12, size=(3, 2))
        cpos = rng.integers(0, 12, size=(3, 2))
        cells = [tuple(int(x) for x in c) for c in cpos]
        if len(set(cells)) < 3:
            cells = [(0, 0), (5, 5), (11, 11)]
        path_costs = {
            (d, cells[c]): int(abs(dpos[d][0] - cells[c][0])
                               + abs(dpos[d][1] - cells[c][1]))
            for d in range(3) for c in range(3)
        }
        got = endgame_bidding([0, 1, 2], cells, path_costs)
        total = sum(path_costs[(d, cell)] for d, cell in got.items())
        best = min(
            sum(path_costs[(d, cells[c])] for d, c in enumerate(perm))
            for perm in itertools.permutations(range(3))
        )
        assert total <= 2 * best
        if total == best:
            optimal_hits += 1
    assert optimal_hits >= 80


# ---------------------------------------------------------------------------
# Scalar ops vs vectorized surfaces: exact agreement.
# ---------------------------------------------------------------------------

def random_explored_drone(rng, kind):
    d = make_drone((0, 0), kind)
    d.local.states[:] = rng.integers(0, 4, size=(12, 12)).astype(np.uint8)
    free = np.argwhere(d.local.states != CellState.OBSTACLE)
    r, c = free[rng.integers(len(free))]
    d.pos = (int(r), int(c))
    d.local.states[d.pos] = CellState.VISITED
    return d


def test_rnn_surface_matches_scalar(rng):
    for trial in range(10):
        kind = GridKind.QUAD if trial % 2 == 0 else GridKind.HEX
        d = random_explored_drone(rng, kind)
        if rng.random() < 0.5:
            d.target_subarea = (int(rng.integers(0, 3)), int(rng.integers(0, 3)))
        table = ApproachTable({
            (int(sr), int(sc)): int(rng.integers(0, 4))
            for sr in range(3) for sc in range(3)
        })
        p = CostParams(alpha=float(rng.integers(1, 8)),
                       beta=float(rng.integers(1, 8)))
        g_field = plan_field(d.local, d.pos)
        h_field = heuristic_field(d.pos, d.local)
        w_blocks = not_visited_block_counts(d.local.states, 4, 4)
        weights = UnexploredWeights({
            (sr, sc): int(w_blocks[sr, sc]) for sr in range(3) for sc in range(3)
        })
        plain = rnn_cost_surface(d, g_field, h_field, table, None, p)
        weighted = rnn_cost_surface(d, g_field, h_field, table, w_blocks, p)
        for r in range(12):
            for c in range(12):
                if g_field[r, c] < 0:
                    continue
                g = int(g_field[r, c])
                assert plain[r, c] == rnn_cost(d, (r, c), g, table, p)
                assert weighted[r, c] == weighted_rnn_cost(
                    d, (r, c), g, table, weights, p, 16
                )


def test_pso_surface_matches_scalar(rng):
    for _ in range(5):
        d = random_explored_drone(rng, GridKind.QUAD)
        positions = {0: d.pos}
        for i in range(1, 6):
            positions[i] = tuple(int(x) for x in rng.integers(0, 12, size=2))
        p = CostParams(alpha=float(rng.integers(1, 8)))
        g_field = plan_field(d.local, d.pos)
        h_field = heuristic_field(d.pos, d.local)
        surface = pso_cost_surface(d, g_field, h_field, positions, p)
        for r in range(12):
            for c in range(12):
                if g_field[r, c] < 0:
                    continue
                k = sum(
                    1 for i, (pr, pc) in positions.items()
                    if i != d.id
                    and min(d.pos[0], r) <= pr <= max(d.pos[0], r)
                    and min(d.pos[1], c) <= pc <= max(d.pos[1], c)
                )
                expected = (int(g_field[r, c]) + int(h_field[r, c])) + p.alpha * k
                assert surface[r, c] == expected


def test_block_helpers():
    table = ApproachTable({(0, 1): 3, (1, 0): 1})
    blocks = approach_block_counts(table, 2, 2)
    assert blocks.tolist() == [[0, 3], [1, 0]]
    excl = approach_block_counts(table, 2, 2, exclude=(0, 1))
    assert excl.tolist() == [[0, 2], [1, 0]]
    expanded = expand_blocks(np.array([[1, 2], [3, 4]]), 2, 2)
    assert expanded.shape == (4, 4)
    assert expanded[0, 0] == 1 and expanded[3, 3] == 4

    states = np.full((4, 4), CellState.VISITED, dtype=np.uint8)
    states[0, 0] = CellState.UNEXPLORED
    states[3, 3] = CellState.FRONTIER
    nv = not_visited_block_counts(states, 2, 2)
    assert nv.tolist() == [[1, 0], [0, 1]]
