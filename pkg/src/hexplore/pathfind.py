"""Shortest paths over a drone's local map.

Known obstacles block; unexplored, frontier and visited cells are all
traversable for planning.  Frontier cells are by definition unvisited, so
paths must be allowed to end on them; replanning every tick bounds the
damage when an unexplored cell later turns out to be an obstacle.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .grid import (
    Cell, GridKind, Subarea, heuristic_distance, movement_neighbors,
    movement_table,
)
from .kernels import distance_field
from .localmap import CellState, LocalMap


@dataclass
class Path:
    """Cells from start to goal inclusive; cost is the step count."""

    cells: List[Cell]

    @property
    def cost(self) -> int:
        return len(self.cells) - 1


def plan_field(local: LocalMap, pos: Cell) -> np.ndarray:
    """BFS step counts from pos to every cell, known obstacles blocked."""
    return distance_field(
        local.known_blocked(), pos[0], pos[1], local.kind is GridKind.HEX
    )


def astar(local: LocalMap, start: Cell, goal: Cell) -> Optional[Path]:
    """Minimum-step path from start to goal, or None if unreachable.

    Expansion order is deterministic: lower f, then lower h, then
    row-major coordinate order.
    """
    if not (0 <= start[0] < local.height and 0 <= start[1] < local.width):
        raise ValueError(f"start {start} out of bounds")
    states = local.states
    if states[start] == CellState.OBSTACLE:
        raise ValueError(f"start {start} is a known obstacle")
    if states[goal] == CellState.OBSTACLE:
        raise ValueError(f"goal {goal} is a known obstacle")
    if start == goal:
        return Path([start])

    h0 = heuristic_distance(start, goal, local.kind)
    open_heap = [(h0, h0, start)]
    g_score = {start: 0}
    parent = {}
    closed = set()
    while open_heap:
        f, h, cur = heapq.heappop(open_heap)
        if cur in closed:
            continue
        if cur == goal:
            cells = [cur]
            while cur != start:
                cur = parent[cur]
                cells.append(cur)
            cells.reverse()
            return Path(cells)
        closed.add(cur)
        g_next = g_score[cur] + 1
        for n in movement_neighbors(cur, local):
            if states[n] == CellState.OBSTACLE:
                continue
            if g_next < g_score.get(n, np.inf):
                g_score[n] = g_next
                parent[n] = cur
                hn = heuristic_distance(n, goal, local.kind)
                heapq.heappush(open_heap, (g_next + hn, hn, n))
    return None


def path_from_field(local: LocalMap, field: np.ndarray, goal: Cell) -> Path:
    """Reconstruct a shortest path ending at goal from a plan_field result.

    Walks backward from the goal, taking the first movement neighbor (in
    direction-priority order) one step closer to the source; deterministic.
    """
    d = int(field[goal])
    if d < 0:
        raise ValueError(f"goal {goal} unreachable in the given field")
    cells = [goal]
    cur = goal
    table = movement_table(local)
    while d > 0:
        for n in table[cur[0] * local.width + cur[1]]:
            if field[n] == d - 1:
                cur = n
                break
        else:
            raise ValueError("inconsistent distance field")
        d -= 1
        cells.append(cur)
    cells.reverse()
    return Path(cells)


def nearest_frontier(
    local: LocalMap, pos: Cell, restrict: Optional[Subarea] = None
) -> Optional[Tuple[Cell, Path]]:
    """Reachable frontier cell with minimum path cost from pos.

    Ties break by row-major coordinate order.  With `restrict`, only
    frontiers inside that subarea qualify.  None if no frontier reachable.
    """
    field = plan_field(local, pos)
    mask = (local.states == CellState.FRONTIER) & (field >= 0)
    if restrict is not None:
        keep = np.zeros_like(mask)
        r0 = restrict[0] * local.subarea_height
        c0 = restrict[1] * local.subarea_width
        keep[r0:r0 + local.subarea_height, c0:c0 + local.subarea_width] = True
        mask &= keep
    if not mask.any():
        return None
    dists = np.where(mask, field, np.iinfo(np.int32).max)
    idx = int(np.argmin(dists))  # first occurrence = row-major tie-break
    goal = (idx // local.width, idx % local.width)
    return goal, path_from_field(local, field, goal)
