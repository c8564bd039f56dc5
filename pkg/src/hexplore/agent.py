"""Per-drone state and the exploration-state controller.

A drone in exploration mode sweeps its current subarea: it prefers an
adjacent frontier cell (direction-priority order), falls back to the
nearest frontier in the subarea, and reports None when the subarea is
done so the engine can switch it to moving mode.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Dict, Optional

import numpy as np

from .grid import Cell, GridMap, Subarea, movement_table, sensing_table
from .localmap import CellState, LocalMap
from .pathfind import nearest_frontier, path_from_field, plan_field

_UNEXPLORED = int(CellState.UNEXPLORED)
_FRONTIER = int(CellState.FRONTIER)
_OBSTACLE = int(CellState.OBSTACLE)
_VISITED = int(CellState.VISITED)

if TYPE_CHECKING:
    from .coordination import ApproachTable


class Mode(Enum):
    EXPLORATION = "exploration"
    MOVING = "moving"


@dataclass
class DroneState:
    id: int
    pos: Cell
    local: LocalMap
    mode: Mode = Mode.EXPLORATION
    target_subarea: Optional[Subarea] = None
    # Frontier cell an exploring drone committed to; held until reached or
    # invalidated so a detour across a subarea boundary cannot bounce the
    # drone back and forth between two subareas' frontiers forever.
    exploration_goal: Optional[Cell] = None
    commitment_age: int = 0
    distance_traveled: int = 0
    radio_up: bool = True
    # Last-received long-range state; goes stale while the radio is down.
    approach: Optional["ApproachTable"] = None
    known_positions: Dict[int, Cell] = field(default_factory=dict)


def new_drone(drone_id: int, pos: Cell, world: GridMap) -> DroneState:
    return DroneState(id=drone_id, pos=pos, local=LocalMap.blank(world))


def sense_and_mark(d: DroneState, world: GridMap) -> DroneState:
    """Mark the current cell visited and classify all sensed neighbors.

    Sensed cells outside the current subarea are recorded too; the
    same-subarea restriction is applied at frontier-selection time, not
    here (discarding sensed information would be wasteful).
    """
    states = d.local.states
    blocked = world.blocked
    states[d.pos] = _VISITED
    d.local.visit_counts[d.pos] += 1
    table = sensing_table(world)
    for n in table[d.pos[0] * world.width + d.pos[1]]:
        if states[n] == _UNEXPLORED:
            states[n] = _OBSTACLE if blocked[n] else _FRONTIER
    return d


def exploration_step(d: DroneState) -> Optional[Cell]:
    """Next cell for a drone covering its subarea; None = subarea done.

    Adjacent frontiers in the current subarea win, in direction-priority
    order; otherwise head one step along the shortest path to the nearest
    in-subarea frontier.
    """
    local = d.local
    sh, sw = local.subarea_height, local.subarea_width
    sub = (d.pos[0] // sh, d.pos[1] // sw)
    states = local.states
    table = movement_table(local)
    for n in table[d.pos[0] * local.width + d.pos[1]]:
        if states[n] == _FRONTIER and n[0] // sh == sub[0] and n[1] // sw == sub[1]:
            return n
    found = nearest_frontier(d.local, d.pos, restrict=sub)
    if found is None:
        return None
    _, path = found
    return path.cells[1]


def exploration_action(d: DroneState) -> Optional[Cell]:
    """exploration_step with a sticky distant-frontier goal (engine path).

    An adjacent same-subarea frontier always wins and drops the goal.
    Otherwise a still-valid committed goal is pursued to completion;
    only then is a fresh nearest in-subarea frontier chosen.
    """
    local = d.local
    sh, sw = local.subarea_height, local.subarea_width
    sub = (d.pos[0] // sh, d.pos[1] // sw)
    states = local.states
    table = movement_table(local)
    for n in table[d.pos[0] * local.width + d.pos[1]]:
        if states[n] == _FRONTIER and n[0] // sh == sub[0] and n[1] // sw == sub[1]:
            d.exploration_goal = None
            return n
    goal = d.exploration_goal
    if goal is not None and states[goal] == _FRONTIER:
        field = plan_field(local, d.pos)
        if field[goal] >= 0:
            return path_from_field(local, field, goal).cells[1]
    found = nearest_frontier(local, d.pos, restrict=sub)
    if found is None:
        d.exploration_goal = None
        return None
    cell, path = found
    d.exploration_goal = cell
    return path.cells[1]


def merge_maps(a: LocalMap, b: LocalMap) -> LocalMap:
    """Join two maps under the knowledge order; commutative on states.

    Visit counts are not summed: the result keeps a's own counts, only
    the state matrices merge.
    """
    if a.states.shape != b.states.shape:
        raise ValueError(
            f"map dimension mismatch: {a.states.shape} vs {b.states.shape}"
        )
    return LocalMap(
        states=np.maximum(a.states, b.states),
        visit_counts=a.visit_counts.copy(),
        kind=a.kind,
        subarea_height=a.subarea_height,
        subarea_width=a.subarea_width,
    )
