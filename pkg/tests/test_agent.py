"""Local maps, sensing, subarea coverage, and map merging."""
import numpy as np
import pytest

from hexplore.agent import (
    exploration_step, merge_maps, new_drone, sense_and_mark,
)
from hexplore.grid import GridKind, GridMap
from hexplore.localmap import CellState, LocalMap

from conftest import empty_world


def test_cellstate_knowledge_order():
    assert (CellState.UNEXPLORED < CellState.FRONTIER
            < CellState.OBSTACLE < CellState.VISITED)


def test_blank_localmap():
    world = empty_world(5, 7, sub=(5, 7))
    m = LocalMap.blank(world)
    assert m.height == 5 and m.width == 7
    assert (m.states == CellState.UNEXPLORED).all()
    assert (m.visit_counts == 0).all()


def test_sense_and_mark_classifies_neighbors():
    blocked = np.zeros((5, 5), dtype=bool)
    blocked[1, 2] = True
    world = GridMap(5, 5, GridKind.QUAD, 5, 5, blocked)
    d = new_drone(0, (2, 2), world)
    sense_and_mark(d, world)
    assert d.local.states[2, 2] == CellState.VISITED
    assert d.local.visit_counts[2, 2] == 1
    assert d.local.states[1, 2] == CellState.OBSTACLE
    # All eight sensed neighbors are classified; free ones are frontiers.
    assert d.local.states[2, 1] == CellState.FRONTIER
    assert d.local.states[1, 1] == CellState.FRONTIER
    assert d.local.states[3, 3] == CellState.FRONTIER
    # Cells out of sensing range stay unknown.
    assert d.local.states[0, 0] == CellState.UNEXPLORED


def test_sense_and_mark_does_not_downgrade():
    world = empty_world(4, 4, sub=(4, 4))
    d = new_drone(0, (1, 1), world)
    sense_and_mark(d, world)
    d.pos = (1, 2)
    sense_and_mark(d, world)
    # (1,1) was visited; sensing it again from (1,2) must not reset it.
    assert d.local.states[1, 1] == CellState.VISITED


def test_sense_counts_accumulate_in_place():
    world = empty_world(3, 3, sub=(3, 3))
    d = new_drone(0, (1, 1), world)
    sense_and_mark(d, world)
    sense_and_mark(d, world)
    assert d.local.visit_counts[1, 1] == 2


def test_exploration_step_prefers_adjacent_frontier_in_order():
    world = empty_world(5, 5, sub=(5, 5))
    d = new_drone(0, (2, 2), world)
    d.local.states[:] = CellState.VISITED
    d.local.states[3, 2] = CellState.FRONTIER  # south
    d.local.states[2, 3] = CellState.FRONTIER  # east
    # Priority is N, S, E, W, so south wins over east.
    assert exploration_step(d) == (3, 2)


def test_exploration_step_ignores_other_subarea_frontier():
    world = empty_world(4, 8, sub=(4, 4))
    d = new_drone(0, (1, 3), world)
    d.local.states[:] = CellState.VISITED
    d.local.states[1, 4] = CellState.FRONTIER  # adjacent but subarea (0,1)
    d.local.states[1, 0] = CellState.FRONTIER  # own subarea, distance 3
    step = exploration_step(d)
    assert step == (1, 2)  # first step toward the in-subarea frontier


def test_exploration_step_none_when_subarea_done():
    world = empty_world(4, 8, sub=(4, 4))
    d = new_drone(0, (1, 1), world)
    d.local.states[:, :4] = CellState.VISITED
    d.local.states[:, 4:] = CellState.FRONTIER
    assert exploration_step(d) is None


def test_merge_is_elementwise_max():
    world = empty_world(4, 4, sub=(4, 4))
    a = LocalMap.blank(world)
    b = LocalMap.blank(world)
    a.states[0, 0] = CellState.VISITED
    b.states[0, 1] = CellState.FRONTIER
    b.states[0, 0] = CellState.FRONTIER
    m = merge_maps(a, b)
    assert m.states[0, 0] == CellState.VISITED
    assert m.states[0, 1] == CellState.FRONTIER


def test_merge_properties(rng):
    world = empty_world(6, 6, sub=(6, 6))
    for _ in range(20):
        a = LocalMap.blank(world)
        b = LocalMap.blank(world)
        a.states[:] = rng.integers(0, 4, size=(6, 6)).astype(np.uint8)
        b.states[:] = rng.integers(0, 4, size=(6, 6)).astype(np.uint8)
        ab = merge_maps(a, b)
        ba = merge_maps(b, a)
        # Commutative on states, idempotent, monotone in the knowledge order.
        assert np.array_equal(ab.states, ba.states)
        assert np.array_equal(merge_maps(a, a).states, a.states)
        assert (ab.states >= a.states).all() and (ab.states >= b.states).all()


def test_merge_keeps_own_visit_counts():
    world = empty_world(4, 4, sub=(4, 4))
    a = LocalMap.blank(world)
    b = LocalMap.blank(world)
    a.visit_counts[0, 0] = 3
    b.visit_counts[1, 1] = 5
    m = merge_maps(a, b)
    assert m.visit_counts[0, 0] == 3
    assert m.visit_counts[1, 1] == 0


def test_merge_dimension_mismatch():
    a = LocalMap.blank(empty_world(4, 4, sub=(4, 4)))
    b = LocalMap.blank(empty_world(4, 5, sub=(4, 5)))
    with pytest.raises(ValueError):
        merge_maps(a, b)


def test_subarea_has_frontier():
    world = empty_world(4, 8, sub=(4, 4))
    m = LocalMap.blank(world)
    m.states[2, 6] = CellState.FRONTIER
    assert not m.subarea_has_frontier((0, 0))
    assert m.subarea_has_frontier((0, 1))
