# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled BFS kernel: grid distance fields for quad and odd-r hex grids.

Behavior matches hexplore._pykernels.distance_field bit for bit.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef int QUAD_DR[4]
cdef int QUAD_DC[4]
QUAD_DR[:] = [-1, 1, 0, 0]
QUAD_DC[:] = [0, 0, 1, -1]

cdef int HEX_EVEN_DR[6]
cdef int HEX_EVEN_DC[6]
HEX_EVEN_DR[:] = [0, -1, -1, 0, 1, 1]
HEX_EVEN_DC[:] = [1, 0, -1, -1, -1, 0]

cdef int HEX_ODD_DR[6]
cdef int HEX_ODD_DC[6]
HEX_ODD_DR[:] = [0, -1, -1, 0, 1, 1]
HEX_ODD_DC[:] = [1, 1, 0, -1, 0, 1]


def distance_field(const cnp.uint8_t[:, ::1] blocked, int start_r, int start_c,
                   bint hex_grid):
    """BFS shortest step counts from (start_r, start_c) to every cell.

    blocked: uint8 (H, W), nonzero = impassable.  Returns int32 (H, W)
    with -1 for unreachable or blocked cells.
    """
    cdef int h = blocked.shape[0]
    cdef int w = blocked.shape[1]
    dist_arr = np.full((h, w), -1, dtype=np.int32)
    cdef cnp.int32_t[:, ::1] dist = dist_arr
    cdef cnp.int32_t[::1] qr = np.empty(h * w, dtype=np.int32)
    cdef cnp.int32_t[::1] qc = np.empty(h * w, dtype=np.int32)
    cdef int head = 0, tail = 0
    cdef int r, c, nr, nc, d, k, n_dirs
    cdef int *drs
    cdef int *dcs

    dist[start_r, start_c] = 0
    qr[tail] = start_r
    qc[tail] = start_c
    tail += 1
    n_dirs = 6 if hex_grid else 4
    while head < tail:
        r = qr[head]
        c = qc[head]
        head += 1
        d = dist[r, c] + 1
        if hex_grid:
            if r & 1:
                drs = HEX_ODD_DR
                dcs = HEX_ODD_DC
            else:
                drs = HEX_EVEN_DR
                dcs = HEX_EVEN_DC
        else:
            drs = QUAD_DR
            dcs = QUAD_DC
        for k in range(n_dirs):
            nr = r + drs[k]
            nc = c + dcs[k]
            if 0 <= nr < h and 0 <= nc < w and dist[nr, nc] < 0 and blocked[nr, nc] == 0:
                dist[nr, nc] = d
                qr[tail] = nr
                qc[tail] = nc
                tail += 1
    return dist_arr
