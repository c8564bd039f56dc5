"""Text rendering of the world state.

One token per cell: '#' obstacle, '.' unvisited, a digit (or '+' past 9)
for the visit count, 'D' where a drone stands.  Odd hex rows get one
leading space to suggest the offset tessellation.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .grid import Cell, GridKind, GridMap


def render(world: GridMap, visits: np.ndarray, drone_positions: Iterable[Cell]) -> str:
    occupied = set(drone_positions)
    lines = []
    for r in range(world.height):
        tokens = []
        for c in range(world.width):
            if (r, c) in occupied:
                tokens.append("D")
            elif world.blocked[r, c]:
                tokens.append("#")
            else:
                v = int(visits[r, c])
                if v == 0:
                    tokens.append(".")
                elif v <= 9:
                    tokens.append(str(v))
                else:
                    tokens.append("+")
        prefix = " " if (world.kind is GridKind.HEX and r % 2 == 1) else ""
        lines.append(prefix + " ".join(tokens))
    return "\n".join(lines)
