"""Grid geometry for quadrangular and hexagonal worlds.

Both grid kinds live in one rectangular [height x width] index matrix.
Hex grids use odd-r offset coordinates: odd rows are shifted half a cell
toward +col, and neighbor deltas depend on row parity.  Subareas are
rectangular blocks of the index matrix for both kinds.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterator, Tuple

import numpy as np

from .errors import ConfigError, GenerationError
from .kernels import distance_field

Cell = Tuple[int, int]  # (row, col)
Subarea = Tuple[int, int]  # (srow, scol)


class GridKind(Enum):
    QUAD = "quad"
    HEX = "hex"


# Quad movement priority: North, South, East, West.
QUAD_MOVE_DELTAS = ((-1, 0), (1, 0), (0, 1), (0, -1))
# Quad sensing: N, NE, E, SE, S, SW, W, NW.
QUAD_SENSE_DELTAS = (
    (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1),
)
# Hex movement priority, clockwise from East: E, NE, NW, W, SW, SE.
# Odd-r offset deltas depend on row parity (index 0 = even row, 1 = odd row).
HEX_MOVE_DELTAS = (
    ((0, 1), (-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0)),
    ((0, 1), (-1, 1), (-1, 0), (0, -1), (1, 0), (1, 1)),
)


@dataclass(frozen=True)
class GridMap:
    """Ground-truth world: immutable after generation."""

    height: int
    width: int
    kind: GridKind
    subarea_height: int
    subarea_width: int
    blocked: np.ndarray  # bool (height, width); True where an obstacle sits

    def __post_init__(self) -> None:
        if self.height % self.subarea_height or self.width % self.subarea_width:
            raise ConfigError(
                f"subarea dims {self.subarea_height}x{self.subarea_width} must "
                f"divide grid dims {self.height}x{self.width}"
            )
        self.blocked.setflags(write=False)

    @property
    def obstacles(self) -> frozenset:
        return frozenset(zip(*np.nonzero(self.blocked)))

    @property
    def n_free(self) -> int:
        return int(self.height * self.width - np.count_nonzero(self.blocked))

    def in_bounds(self, c: Cell) -> bool:
        return 0 <= c[0] < self.height and 0 <= c[1] < self.width

    def free_cells(self) -> Iterator[Cell]:
        for r, c in zip(*np.nonzero(~self.blocked)):
            yield (int(r), int(c))


def _check_bounds(c: Cell, g) -> None:
    if not (0 <= c[0] < g.height and 0 <= c[1] < g.width):
        raise ValueError(f"cell {c} out of bounds for {g.height}x{g.width} grid")


@lru_cache(maxsize=32)
def _neighbor_table(height: int, width: int, kind: GridKind, sense: bool):
    """Precomputed in-bounds neighbor tuples per cell, priority order kept."""
    if kind is GridKind.QUAD:
        delta_rows = [QUAD_SENSE_DELTAS if sense else QUAD_MOVE_DELTAS] * 2
    else:
        delta_rows = HEX_MOVE_DELTAS
    table = []
    for r in range(height):
        deltas = delta_rows[r & 1]
        for col in range(width):
            table.append(tuple(
                (r + dr, col + dc)
                for dr, dc in deltas
                if 0 <= r + dr < height and 0 <= col + dc < width
            ))
    return table


def movement_table(g) -> list:
    """Flat-indexed movement neighbor table for g's geometry (hot path)."""
    return _neighbor_table(g.height, g.width, g.kind, False)


def sensing_table(g) -> list:
    """Flat-indexed sensing neighbor table for g's geometry (hot path)."""
    return _neighbor_table(g.height, g.width, g.kind, True)


def movement_neighbors(c: Cell, g) -> list:
    """In-bounds movement neighbors of c in fixed priority order.

    Obstacle cells are included; the caller decides traversability.
    `g` needs only height/width/kind, so both GridMap and LocalMap work.
    """
    _check_bounds(c, g)
    return list(movement_table(g)[c[0] * g.width + c[1]])


def sensing_neighbors(c: Cell, g) -> list:
    """Cells visible from c: 8 for quad (cardinals + diagonals), 6 for hex."""
    _check_bounds(c, g)
    return list(sensing_table(g)[c[0] * g.width + c[1]])


def subarea_of(c: Cell, g) -> Subarea:
    """Block index of the subarea containing c."""
    _check_bounds(c, g)
    return (c[0] // g.subarea_height, c[1] // g.subarea_width)


def _oddr_to_cube(c: Cell) -> Tuple[int, int, int]:
    r, col = c
    x = col - (r - (r & 1)) // 2
    z = r
    return (x, -x - z, z)


def heuristic_distance(a: Cell, b: Cell, kind: GridKind) -> int:
    """Admissible step-count lower bound between two cells.

    Quad: Manhattan distance (tightest admissible metric for 4-connected
    moves).  Hex: offset coords converted to cube coords, max-norm.
    """
    if kind is GridKind.QUAD:
        return abs(a[0] - b[0]) + abs(a[1] - b[1])
    ax, ay, az = _oddr_to_cube(a)
    bx, by, bz = _oddr_to_cube(b)
    return max(abs(ax - bx), abs(ay - by), abs(az - bz))


@lru_cache(maxsize=32)
def _cube_coords(height: int, width: int):
    """Per-cell cube coordinates (x, y, z) for an odd-r hex grid."""
    rows, cols = np.indices((height, width))
    x = cols - (rows - (rows & 1)) // 2
    z = rows
    y = -x - z
    return x, y, z


def heuristic_field(a: Cell, g) -> np.ndarray:
    """heuristic_distance from a to every cell of the grid, vectorized."""
    if g.kind is GridKind.QUAD:
        rows, cols = np.indices((g.height, g.width))
        return np.abs(rows - a[0]) + np.abs(cols - a[1])
    x, y, z = _cube_coords(g.height, g.width)
    ax, ay, az = _oddr_to_cube(a)
    return np.maximum.reduce(
        [np.abs(x - ax), np.abs(y - ay), np.abs(z - az)]
    )


CONNECTIVITY_RETRY_LIMIT = 1000


def generate_environment(
    height: int,
    width: int,
    kind: GridKind,
    subarea_dims: Tuple[int, int],
    obstacle_fraction: float,
    seed: int,
) -> GridMap:
    """Random connected environment with the requested obstacle fraction.

    Places exactly round(fraction * cells) obstacles with the seeded
    generator, resampling until the free cells form a single connected
    component under the movement-neighbor relation.
    """
    if not 0.0 <= obstacle_fraction <= 0.5:
        raise ConfigError(f"obstacle_fraction {obstacle_fraction} outside [0, 0.5]")
    sh, sw = subarea_dims
    if height % sh or width % sw:
        raise ConfigError(
            f"subarea dims {sh}x{sw} must divide grid dims {height}x{width}"
        )
    n_cells = height * width
    n_obstacles = round(obstacle_fraction * n_cells)
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(CONNECTIVITY_RETRY_LIMIT):
        flat = rng.choice(n_cells, size=n_obstacles, replace=False)
        blocked = np.zeros(n_cells, dtype=bool)
        blocked[flat] = True
        blocked = blocked.reshape(height, width)
        grid = GridMap(height, width, kind, sh, sw, blocked)
        if _free_connected(grid):
            return grid
    raise GenerationError(
        f"no connected layout found in {CONNECTIVITY_RETRY_LIMIT} attempts "
        f"(fraction {obstacle_fraction}, {height}x{width})"
    )


def _free_connected(g: GridMap) -> bool:
    free = ~g.blocked
    n_free = int(np.count_nonzero(free))
    if n_free == 0:
        return False
    start = np.argwhere(free)[0]
    dist = distance_field(
        g.blocked.astype(np.uint8), int(start[0]), int(start[1]),
        g.kind is GridKind.HEX,
    )
    return int(np.count_nonzero(dist >= 0)) == n_free
