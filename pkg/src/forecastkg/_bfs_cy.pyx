# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled BFS kernel; semantic twin of _bfs_py.bfs_stats.

All arithmetic is on int64 indices and unit hop counts, so the results
are bit-identical to the pure-Python kernel on any input.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def bfs_stats(offsets, neighbors, sources):
    """Per-source (sum of distances, reached count, max distance)."""
    cdef cnp.int64_t[::1] offs = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef cnp.int64_t[::1] neigh = np.ascontiguousarray(neighbors, dtype=np.int64)
    cdef cnp.int64_t[::1] srcs = np.ascontiguousarray(sources, dtype=np.int64)
    cdef Py_ssize_t n = offs.shape[0] - 1
    cdef Py_ssize_t m = srcs.shape[0]

    sums_arr = np.zeros(m, dtype=np.int64)
    counts_arr = np.zeros(m, dtype=np.int64)
    maxes_arr = np.zeros(m, dtype=np.int64)
    cdef cnp.int64_t[::1] sums = sums_arr
    cdef cnp.int64_t[::1] counts = counts_arr
    cdef cnp.int64_t[::1] maxes = maxes_arr

    dist_arr = np.empty(n, dtype=np.int64)
    queue_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] dist = dist_arr
    cdef cnp.int64_t[::1] queue = queue_arr

    cdef Py_ssize_t s, i, head, tail, j
    cdef cnp.int64_t source, u, v, du, dv, total, reached, farthest

    for s in range(m):
        source = srcs[s]
        for i in range(n):
            dist[i] = -1
        dist[source] = 0
        queue[0] = source
        head = 0
        tail = 1
        total = 0
        reached = 0
        farthest = 0
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            for j in range(offs[u], offs[u + 1]):
                v = neigh[j]
                if dist[v] < 0:
                    dv = du + 1
                    dist[v] = dv
                    queue[tail] = v
                    tail += 1
                    total += dv
                    reached += 1
                    if dv > farthest:
                        farthest = dv
        sums[s] = total
        counts[s] = reached
        maxes[s] = farthest

    return sums_arr.tolist(), counts_arr.tolist(), maxes_arr.tolist()
