"""Shared helpers: independent oracles and scripted world builders.

The oracles here are written from scratch on purpose (plain dicts and
deques, no package kernels) so the tests compare two independent
implementations rather than a function against itself.
"""
import numpy as np
import pytest

from hexplore.agent import Mode, new_drone
from hexplore.engine import SimConfig, Simulation
from hexplore.grid import GridKind, GridMap
from hexplore.localmap import CellState

QUAD_DELTAS = ((-1, 0), (1, 0), (0, 1), (0, -1))
HEX_EVEN = ((0, 1), (-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0))
HEX_ODD = ((0, 1), (-1, 1), (-1, 0), (0, -1), (1, 0), (1, 1))


def oracle_neighbors(cell, height, width, kind):
    r, c = cell
    if kind is GridKind.QUAD:
        deltas = QUAD_DELTAS
    else:
        deltas = HEX_ODD if r % 2 else HEX_EVEN
    out = []
    for dr, dc in deltas:
        nr, nc = r + dr, c + dc
        if 0 <= nr < height and 0 <= nc < width:
            out.append((nr, nc))
    return out


def oracle_bfs(blocked, start, kind):
    """Dict-based BFS shortest step counts; -1 convention not used, just
    absence from the dict for unreachable cells."""
    from collections import deque

    h, w = blocked.shape
    dist = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for n in oracle_neighbors(cur, h, w, kind):
            if n not in dist and not blocked[n]:
                dist[n] = dist[cur] + 1
                queue.append(n)
    return dist


def empty_world(height, width, kind=GridKind.QUAD, sub=None):
    sh, sw = sub if sub else (height, width)
    return GridMap(height, width, kind, sh, sw,
                   np.zeros((height, width), dtype=bool))


def random_world(rng, height, width, kind, fraction=0.2, sub=None):
    """Random obstacle layout, not necessarily connected (fine for
    pathfinding tests that handle unreachable goals)."""
    sh, sw = sub if sub else (height, width)
    blocked = rng.random((height, width)) < fraction
    return GridMap(height, width, kind, sh, sw, blocked)


def corridor_sim(strategy, p0, p1, alpha):
    """3x15 quad corridor: the middle three subareas are pre-explored,
    the far-left and far-right subareas are unknown.  Both drones start
    in moving mode with the frontier columns (2 and 12) already sensed."""
    from hexplore import CostParams

    cfg = SimConfig(height=3, width=15, subarea_height=3, subarea_width=3,
                    n_drones=2, obstacle_fraction=0.0, strategy=strategy,
                    seed=0, params=CostParams(alpha=alpha))
    world = empty_world(3, 15, GridKind.QUAD, sub=(3, 3))
    drones = [new_drone(0, p0, world), new_drone(1, p1, world)]
    for d in drones:
        d.local.states[:, 3:12] = CellState.VISITED
        d.local.states[:, 2] = CellState.FRONTIER
        d.local.states[:, 12] = CellState.FRONTIER
        d.mode = Mode.MOVING
    return Simulation(cfg, world=world, drones=drones)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
