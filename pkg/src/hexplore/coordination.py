"""Moving-state target selection.

Strategies costed here:
  - PSO baseline: nearest candidate penalized by companions "in its
    direction" (reconstructed as: inside the bounding box spanned by the
    drone and the candidate).
  - RNN: penalize candidates in subareas that other drones declared as
    their target last tick.
  - Weighted RNN: RNN with a bonus proportional to the unexplored
    fraction of the candidate's subarea.

Also holds the deadlock hysteresis (a freshly chosen subarea is held for
one extra tick before the drone may switch) and the endgame greedy
bidding that assigns the last few unexplored cells one drone each.

Scalar operations are the contract; the *_surface functions are the
vectorized equivalents the engine uses, tested for exact agreement.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from .agent import DroneState
from .grid import Cell, GridKind, Subarea, heuristic_distance, subarea_of

#: Ticks a newly selected target subarea is held before re-evaluation.
COMMITMENT_WINDOW = 2


class Strategy(Enum):
    PSO = "PSO"
    QRNN = "QRNN"
    QRNN_SRC = "QRNN-SRC"
    HRNN_SRC = "HRNN-SRC"
    WHRNN_SRC = "WHRNN-SRC"

    @property
    def grid_kind(self) -> GridKind:
        if self in (Strategy.HRNN_SRC, Strategy.WHRNN_SRC):
            return GridKind.HEX
        return GridKind.QUAD

    @property
    def uses_src(self) -> bool:
        return self in (Strategy.QRNN_SRC, Strategy.HRNN_SRC, Strategy.WHRNN_SRC)

    @property
    def weighted(self) -> bool:
        return self is Strategy.WHRNN_SRC

    @classmethod
    def from_label(cls, label: str) -> "Strategy":
        for s in cls:
            if s.value == label:
                return s
        raise ValueError(f"unknown strategy {label!r}")


@dataclass
class CostParams:
    alpha: float = 2.0
    beta: float = 4.0


@dataclass
class ApproachTable:
    """Per-subarea count of drones that declared it as target last tick."""

    counts: Dict[Subarea, int] = field(default_factory=dict)

    def count(self, sub: Subarea) -> int:
        return self.counts.get(sub, 0)


@dataclass
class UnexploredWeights:
    """Per-subarea count of cells not yet Visited, previous iteration."""

    w: Dict[Subarea, int] = field(default_factory=dict)

    def of(self, sub: Subarea) -> int:
        return self.w.get(sub, 0)


def _effective_approach(d: DroneState, sub: Subarea, approach: ApproachTable) -> int:
    # A drone must not penalize itself for its own standing commitment.
    s = approach.count(sub)
    if d.target_subarea == sub:
        s = max(0, s - 1)
    return s


def rnn_cost(
    d: DroneState,
    u: Cell,
    g_cost: int,
    approach: ApproachTable,
    p: CostParams,
) -> float:
    """Travel cost plus a penalty per drone already approaching u's subarea."""
    sub = subarea_of(u, d.local)
    h = heuristic_distance(d.pos, u, d.local.kind)
    return (g_cost + h) + p.alpha * _effective_approach(d, sub, approach)


def weighted_rnn_cost(
    d: DroneState,
    u: Cell,
    g_cost: int,
    approach: ApproachTable,
    weights: UnexploredWeights,
    p: CostParams,
    subarea_area: int,
) -> float:
    """rnn_cost minus a bonus for the unexplored fraction of u's subarea."""
    sub = subarea_of(u, d.local)
    return rnn_cost(d, u, g_cost, approach, p) - p.beta * (
        weights.of(sub) / subarea_area
    )


def select_target(
    d: DroneState,
    candidates: Sequence[Tuple[Cell, int]],
    approach: ApproachTable,
    weights: UnexploredWeights,
    strategy: Strategy,
    p: CostParams,
) -> Optional[Tuple[Cell, Subarea]]:
    """Minimum-cost candidate; ties break by row-major cell order.

    Hysteresis: a target subarea chosen less than COMMITMENT_WINDOW ticks
    ago restricts the choice to that subarea while it still has a
    reachable candidate.  None signals that exploration is globally
    complete as far as this drone can tell.
    """
    if not candidates:
        return None
    pool = candidates
    if d.target_subarea is not None and d.commitment_age < COMMITMENT_WINDOW:
        held = [
            (u, g) for u, g in candidates
            if subarea_of(u, d.local) == d.target_subarea
        ]
        if held:
            pool = held
    area = d.local.subarea_height * d.local.subarea_width
    best_key = None
    best = None
    for u, g in pool:
        if strategy.weighted:
            cost = weighted_rnn_cost(d, u, g, approach, weights, p, area)
        else:
            cost = rnn_cost(d, u, g, approach, p)
        key = (cost, u)
        if best_key is None or key < best_key:
            best_key = key
            best = u
    return best, subarea_of(best, d.local)


def _in_box(p: Cell, a: Cell, b: Cell) -> bool:
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def pso_target(
    d: DroneState,
    candidates: Sequence[Tuple[Cell, int]],
    drone_positions: Mapping[int, Cell],
    p: CostParams,
) -> Optional[Tuple[Cell, Subarea]]:
    """PSO-style choice: travel cost plus alpha per companion on the way.

    A companion counts when its position lies inside the axis-aligned
    bounding box spanned by the drone and the candidate cell.  No subarea
    approach counts are used; that is exactly what RNN adds.
    """
    if not candidates:
        return None
    companions = [pos for i, pos in drone_positions.items() if i != d.id]
    best_key = None
    best = None
    for u, g in candidates:
        h = heuristic_distance(d.pos, u, d.local.kind)
        k = sum(1 for pos in companions if _in_box(pos, d.pos, u))
        cost = (g + h) + p.alpha * k
        key = (cost, u)
        if best_key is None or key < best_key:
            best_key = key
            best = u
    return best, subarea_of(best, d.local)


def endgame_bidding(
    drones_in_moving: Iterable[int],
    unexplored_cells: Iterable[Cell],
    path_costs: Mapping[Tuple[int, Cell], int],
) -> Dict[int, Cell]:
    """Greedy min-cost one-to-one assignment of drones to the last cells.

    Repeatedly takes the cheapest remaining (drone, cell) pair; ties by
    drone id then row-major cell.  Unassigned drones halt in place; a
    cell unreachable by every remaining drone is left unassigned.
    """
    pairs = sorted(
        (cost, did, cell) for (did, cell), cost in path_costs.items()
    )
    free_drones = set(drones_in_moving)
    free_cells = set(unexplored_cells)
    assignment: Dict[int, Cell] = {}
    for cost, did, cell in pairs:
        if did in free_drones and cell in free_cells:
            assignment[did] = cell
            free_drones.discard(did)
            free_cells.discard(cell)
            if not free_cells or not free_drones:
                break
    return assignment


# ---------------------------------------------------------------------------
# Vectorized cost surfaces (engine hot path).
# ---------------------------------------------------------------------------

def approach_block_counts(
    table: ApproachTable, n_srows: int, n_scols: int,
    exclude: Optional[Subarea] = None,
) -> np.ndarray:
    """Approach counts as a (n_srows, n_scols) int array; `exclude`
    removes one count from that subarea (self-exclusion)."""
    counts = np.zeros((n_srows, n_scols), dtype=np.int64)
    for (sr, sc), n in table.counts.items():
        counts[sr, sc] = n
    if exclude is not None and counts[exclude] > 0:
        counts[exclude] -= 1
    return counts


def not_visited_block_counts(states: np.ndarray, sh: int, sw: int) -> np.ndarray:
    """Per-subarea count of cells not yet Visited (the weight W)."""
    from .localmap import CellState

    h, w = states.shape
    nv = (states != CellState.VISITED).astype(np.int64)
    return nv.reshape(h // sh, sh, w // sw, sw).sum(axis=(1, 3))


def expand_blocks(blocks: np.ndarray, sh: int, sw: int) -> np.ndarray:
    """Broadcast a per-subarea array to per-cell resolution."""
    return np.repeat(np.repeat(blocks, sh, axis=0), sw, axis=1)


def rnn_cost_surface(
    d: DroneState,
    g_field: np.ndarray,
    h_field: np.ndarray,
    approach: ApproachTable,
    weights_blocks: Optional[np.ndarray],
    p: CostParams,
) -> np.ndarray:
    """Per-cell RNN (or weighted RNN) cost; matches the scalar ops exactly."""
    sh, sw = d.local.subarea_height, d.local.subarea_width
    n_sr = d.local.height // sh
    n_sc = d.local.width // sw
    s_blocks = approach_block_counts(approach, n_sr, n_sc, exclude=d.target_subarea)
    cost = (g_field + h_field) + p.alpha * expand_blocks(s_blocks, sh, sw)
    if weights_blocks is not None:
        area = sh * sw
        cost = cost - p.beta * expand_blocks(weights_blocks / area, sh, sw)
    return cost


def pso_cost_surface(
    d: DroneState,
    g_field: np.ndarray,
    h_field: np.ndarray,
    drone_positions: Mapping[int, Cell],
    p: CostParams,
) -> np.ndarray:
    """Per-cell PSO cost; matches pso_target's scalar loop exactly."""
    h, w = g_field.shape
    k = np.zeros((h, w), dtype=np.int64)
    pr, pc = d.pos
    rows = np.arange(h)
    cols = np.arange(w)
    for i, (cr, cc) in drone_positions.items():
        if i == d.id:
            continue
        # Rows u for which cr falls inside [min(pr, u), max(pr, u)]:
        row_ok = (rows >= cr) if cr >= pr else (rows <= cr)
        if cr == pr:
            row_ok = np.ones(h, dtype=bool)
        col_ok = (cols >= cc) if cc >= pc else (cols <= cc)
        if cc == pc:
            col_ok = np.ones(w, dtype=bool)
        k += np.outer(row_ok, col_ok)
    return (g_field + h_field) + p.alpha * k
