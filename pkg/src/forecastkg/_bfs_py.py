"""Pure-Python BFS kernel; semantic twin of the compiled extension.

Given an undirected adjacency in CSR form (offsets, neighbors) and a list
of source indices, runs one breadth-first sweep per source and returns
per-source totals. Kept dependency-free and loop-only so its results are
bit-identical to the compiled kernel.
"""

from __future__ import annotations


def bfs_stats(offsets, neighbors, sources):
    """Per-source (sum of distances, reached count, max distance).

    Distances count unit-length hops; the source itself is excluded from
    all three aggregates. Returns three lists aligned with ``sources``.
    """
    offs = list(offsets)
    neigh = list(neighbors)
    n = len(offs) - 1
    sums = []
    counts = []
    maxes = []
    dist = [-1] * n
    queue = [0] * n
    for source in sources:
        for i in range(n):
            dist[i] = -1
        dist[source] = 0
        queue[0] = source
        head, tail = 0, 1
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
        sums.append(total)
        counts.append(reached)
        maxes.append(farthest)
    return sums, counts, maxes
