"""Per-drone belief state: cell states and visit counts.

Cell state values are ordered by knowledge: UNEXPLORED < FRONTIER <
{OBSTACLE, VISITED}.  Elementwise maximum therefore implements the
map-merge join (an OBSTACLE/VISITED conflict cannot occur because obstacle
beliefs are never wrong and obstacle cells are never visited).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .grid import Cell, GridKind, GridMap


class CellState(IntEnum):
    UNEXPLORED = 0
    FRONTIER = 1
    OBSTACLE = 2
    VISITED = 3


@dataclass
class LocalMap:
    """One drone's map of the world."""

    states: np.ndarray  # uint8 (height, width) of CellState values
    visit_counts: np.ndarray  # int32 (height, width); the drone's own visits
    kind: GridKind
    subarea_height: int
    subarea_width: int

    @property
    def height(self) -> int:
        return self.states.shape[0]

    @property
    def width(self) -> int:
        return self.states.shape[1]

    @classmethod
    def blank(cls, world: GridMap) -> "LocalMap":
        return cls(
            states=np.zeros((world.height, world.width), dtype=np.uint8),
            visit_counts=np.zeros((world.height, world.width), dtype=np.int32),
            kind=world.kind,
            subarea_height=world.subarea_height,
            subarea_width=world.subarea_width,
        )

    def copy(self) -> "LocalMap":
        return LocalMap(
            self.states.copy(), self.visit_counts.copy(),
            self.kind, self.subarea_height, self.subarea_width,
        )

    def known_blocked(self) -> np.ndarray:
        """uint8 mask of cells the drone believes are obstacles."""
        return (self.states == CellState.OBSTACLE).astype(np.uint8)

    def subarea_states(self, sub) -> np.ndarray:
        """View of the state block for one subarea."""
        r0 = sub[0] * self.subarea_height
        c0 = sub[1] * self.subarea_width
        return self.states[r0:r0 + self.subarea_height, c0:c0 + self.subarea_width]

    def subarea_has_frontier(self, sub) -> bool:
        return bool(np.any(self.subarea_states(sub) == CellState.FRONTIER))
