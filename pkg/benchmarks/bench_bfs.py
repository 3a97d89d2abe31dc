"""Benchmark the compiled BFS kernel against the pure-Python fallback.

Builds random graphs of increasing size and times a full all-pairs sweep
with each kernel. Run from the repository root:

    python benchmarks/bench_bfs.py [--max-nodes 4000] [--degree 6]
"""

from __future__ import annotations

import argparse
import random
import time

from forecastkg._bfs_py import bfs_stats as bfs_py

try:
    from forecastkg._bfs_cy import bfs_stats as bfs_cy
except ImportError:
    bfs_cy = None


def random_csr(n: int, degree: int, seed: int = 1):
    rng = random.Random(seed)
    adjacency = [set() for _ in range(n)]
    for u in range(n):
        for _ in range(degree):
            v = rng.randrange(n)
            if v != u:
                adjacency[u].add(v)
                adjacency[v].add(u)
    offsets = [0]
    neighbors = []
    for peers in adjacency:
        neighbors.extend(sorted(peers))
        offsets.append(len(neighbors))
    return offsets, neighbors


def timed(kernel, offsets, neighbors, sources) -> tuple[float, tuple]:
    started = time.perf_counter()
    result = kernel(offsets, neighbors, sources)
    return time.perf_counter() - started, result


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-nodes", type=int, default=4000)
    parser.add_argument("--degree", type=int, default=6)
    args = parser.parse_args()

    sizes = [n for n in (250, 500, 1000, 2000, 4000, 8000) if n <= args.max_nodes]
    print(f"{'nodes':>7} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for n in sizes:
        offsets, neighbors = random_csr(n, args.degree)
        sources = list(range(n))
        py_time, py_result = timed(bfs_py, offsets, neighbors, sources)
        if bfs_cy is None:
            print(f"{n:>7} {py_time:>9.3f}s {'n/a':>10} {'n/a':>8}")
            continue
        cy_time, cy_result = timed(bfs_cy, offsets, neighbors, sources)
        assert cy_result == tuple(py_result), "kernels disagree"
        print(f"{n:>7} {py_time:>9.3f}s {cy_time:>9.3f}s {py_time / cy_time:>7.1f}x")


if __name__ == "__main__":
    main()
