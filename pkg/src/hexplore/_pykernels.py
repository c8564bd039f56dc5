"""Pure-Python fallback for the hot BFS kernel.

Mirrors the compiled implementation in _ckernels.pyx exactly; the two are
interchangeable (see tests and benchmarks/bench_kernels.py).
"""
from collections import deque

import numpy as np

# Same tables as grid.py; duplicated here so the kernel stays dependency-free
# for the extension build.
_QUAD = ((-1, 0), (1, 0), (0, 1), (0, -1))
_HEX_EVEN = ((0, 1), (-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0))
_HEX_ODD = ((0, 1), (-1, 1), (-1, 0), (0, -1), (1, 0), (1, 1))


def distance_field(blocked, start_r, start_c, hex_grid):
    """BFS shortest step counts from (start_r, start_c) to every cell.

    blocked: uint8 (H, W), nonzero = impassable.  Returns int32 (H, W)
    with -1 for unreachable or blocked cells.  The start cell must not be
    blocked.
    """
    h, w = blocked.shape
    dist = np.full((h, w), -1, dtype=np.int32)
    dist[start_r, start_c] = 0
    queue = deque([(start_r, start_c)])
    while queue:
        r, c = queue.popleft()
        d = dist[r, c] + 1
        if hex_grid:
            deltas = _HEX_ODD if r & 1 else _HEX_EVEN
        else:
            deltas = _QUAD
        for dr, dc in deltas:
            nr, nc = r + dr, c + dc
            if 0 <= nr < h and 0 <= nc < w and dist[nr, nc] < 0 and not blocked[nr, nc]:
                dist[nr, nc] = d
                queue.append((nr, nc))
    return dist
