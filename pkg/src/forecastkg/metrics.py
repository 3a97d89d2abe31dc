"""Graph structure metrics: exact and node-sampled estimation.

All path statistics use the undirected view of the graph (every edge
traversable both ways, unit length) over ordered node pairs (u, v), u != v:

    tpl  sum of shortest-path lengths over reachable pairs
    mpl  maximum shortest-path length over reachable pairs
    apl  tpl / number of reachable pairs

Unreachable pairs are excluded from the three and counted separately.
The per-source sweeps run in a compiled kernel when the extension built;
otherwise a pure-Python twin with identical results takes over.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .errors import InvalidArgumentError
from .graph import Graph
from .rng import SplitMix64

try:
    from ._bfs_cy import bfs_stats as _bfs_stats

    KERNEL = "compiled"
except ImportError:  # extension not built on this install
    from ._bfs_py import bfs_stats as _bfs_stats

    KERNEL = "python"


def kernel_name() -> str:
    """Which BFS kernel this process is using ("compiled" or "python")."""
    return KERNEL


@dataclass(frozen=True)
class GraphMetrics:
    node_count: int
    path_count: int
    tpl: int
    mpl: int
    apl: float
    reachable_pair_count: int
    unreachable_pair_count: int
    sampled: bool
    sample_fraction: float
    seed: int | None = None

    def to_dict(self) -> dict:
        doc = {
            "node_count": self.node_count,
            "path_count": self.path_count,
            "tpl": self.tpl,
            "mpl": self.mpl,
            "apl": self.apl,
            "reachable_pair_count": self.reachable_pair_count,
            "unreachable_pair_count": self.unreachable_pair_count,
            "sampled": self.sampled,
            "sample_fraction": self.sample_fraction,
        }
        if self.sampled:
            doc["seed"] = self.seed
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def undirected_csr(graph: Graph) -> tuple[list[int], list[int], list[str]]:
    """Adjacency of the undirected view: (offsets, neighbors, id order).

    Nodes are indexed in ascending id order; parallel edges collapse to a
    single adjacency entry (they cannot change any shortest path).
    """
    order = [node.id for node in graph.nodes()]
    index = {node_id: i for i, node_id in enumerate(order)}
    adjacency: list[set[int]] = [set() for _ in order]
    for edge in graph.edges():
        u, v = index[edge.src], index[edge.dst]
        adjacency[u].add(v)
        adjacency[v].add(u)
    offsets = [0]
    neighbors: list[int] = []
    for peers in adjacency:
        neighbors.extend(sorted(peers))
        offsets.append(len(neighbors))
    return offsets, neighbors, order


def exact_metrics(graph: Graph) -> GraphMetrics:
    """Breadth-first sweep from every node."""
    n = graph.node_count
    if n == 0:
        return GraphMetrics(0, 0, 0, 0, 0.0, 0, 0, False, 1.0)
    offsets, neighbors, _ = undirected_csr(graph)
    sums, counts, maxes = _bfs_stats(offsets, neighbors, list(range(n)))
    tpl = sum(sums)
    reachable = sum(counts)
    mpl = max(maxes)
    apl = float(Fraction(tpl, reachable)) if reachable else 0.0
    return GraphMetrics(
        node_count=n,
        path_count=graph.edge_count,
        tpl=tpl,
        mpl=mpl,
        apl=apl,
        reachable_pair_count=reachable,
        unreachable_pair_count=n * (n - 1) - reachable,
        sampled=False,
        sample_fraction=1.0,
    )


def sampled_metrics(graph: Graph, fraction: float, seed: int) -> GraphMetrics:
    """Estimate path statistics from a uniform sample of source nodes.

    Sources are drawn without replacement from the ascending node-id list
    via repeated (u mod remaining) picks of the deterministic generator.
    tpl is scaled back to all ordered pairs: round(apl * n * (n - 1)),
    which reduces to the exact tpl on connected graphs at fraction 1.
    """
    if not 0.0 < fraction <= 1.0:
        raise InvalidArgumentError(f"sample fraction must be in (0, 1], got {fraction}")
    n = graph.node_count
    if n < 1:
        raise InvalidArgumentError("sampled metrics need at least one node")
    count = max(1, ceil(fraction * n))
    generator = SplitMix64(seed)
    sources = generator.sample_without_replacement(list(range(n)), count)
    offsets, neighbors, _ = undirected_csr(graph)
    sums, counts, maxes = _bfs_stats(offsets, neighbors, sources)
    total = sum(sums)
    reached = sum(counts)
    mpl = max(maxes)
    apl_exact = Fraction(total, reached) if reached else Fraction(0)
    tpl = round(apl_exact * n * (n - 1))
    reachable = round(Fraction(reached, count) * n) if count else 0
    return GraphMetrics(
        node_count=n,
        path_count=graph.edge_count,
        tpl=tpl,
        mpl=mpl,
        apl=float(apl_exact),
        reachable_pair_count=reachable,
        unreachable_pair_count=n * (n - 1) - reachable,
        sampled=True,
        sample_fraction=fraction,
        seed=seed,
    )
