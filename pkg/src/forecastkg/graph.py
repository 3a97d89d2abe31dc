"""Append-only, in-memory typed property graph.

Nodes and edges are immutable once created; ids are assigned in creation
order ("n1", "n2", ... and "e1", "e2", ...), which makes every pipeline
run over the same inputs reproduce the same graph byte for byte.

Persistence is a full-snapshot JSONL file: all nodes in id order, then
all edges in id order, one object per line. The line format is part of
the public contract (the HTTP export endpoint streams it verbatim).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from .errors import InvalidArgumentError, ParseError, UnknownIdError
from .values import PropertyValue, check_value, props_to_json, value_from_json


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    props: dict[str, PropertyValue] = field(default_factory=dict)


@dataclass(frozen=True)
class Edge:
    id: str
    kind: str
    src: str
    dst: str
    props: dict[str, PropertyValue] = field(default_factory=dict)


class Graph:
    """Directed multigraph with per-node adjacency in both directions.

    Mutating calls must be externally serialized (single writer); reads
    may run concurrently with each other. The store never deletes or
    rewrites, so a reader only needs a quiescent graph, not a snapshot.
    """

    def __init__(self) -> None:
        self._nodes: dict[str, Node] = {}
        self._edges: dict[str, Edge] = {}
        self._out: dict[str, list[str]] = {}
        self._in: dict[str, list[str]] = {}
        self._next_node = 1
        self._next_edge = 1

    # -- construction --------------------------------------------------

    def add_node(self, kind: str, props: dict[str, PropertyValue] | None = None) -> str:
        if not kind:
            raise InvalidArgumentError("node kind must be non-empty")
        props = dict(props or {})
        for value in props.values():
            check_value(value)
        node_id = f"n{self._next_node}"
        self._next_node += 1
        self._nodes[node_id] = Node(node_id, kind, props)
        self._out[node_id] = []
        self._in[node_id] = []
        return node_id

    def add_edge(
        self,
        kind: str,
        src: str,
        dst: str,
        props: dict[str, PropertyValue] | None = None,
    ) -> str:
        if not kind:
            raise InvalidArgumentError("edge kind must be non-empty")
        for endpoint in (src, dst):
            if endpoint not in self._nodes:
                raise UnknownIdError(f"unknown endpoint node: {endpoint}", endpoint)
        props = dict(props or {})
        for value in props.values():
            check_value(value)
        edge_id = f"e{self._next_edge}"
        self._next_edge += 1
        self._edges[edge_id] = Edge(edge_id, kind, src, dst, props)
        self._out[src].append(edge_id)
        self._in[dst].append(edge_id)
        return edge_id

    # -- lookup ---------------------------------------------------------

    def node(self, node_id: str) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownIdError(f"unknown node: {node_id}", node_id) from None

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edges[edge_id]
        except KeyError:
            raise UnknownIdError(f"unknown edge: {edge_id}", edge_id) from None

    def has_node(self, node_id: str) -> bool:
        return node_id in self._nodes

    def nodes(self) -> Iterator[Node]:
        """All nodes in id (creation) order."""
        return iter(self._nodes.values())

    def edges(self) -> Iterator[Edge]:
        """All edges in id (creation) order."""
        return iter(self._edges.values())

    def nodes_of_kind(self, kind: str) -> Iterator[Node]:
        return (node for node in self._nodes.values() if node.kind == kind)

    def out_edges(self, node_id: str, kind: str | None = None) -> list[Edge]:
        self.node(node_id)
        edges = (self._edges[eid] for eid in self._out[node_id])
        return [e for e in edges if kind is None or e.kind == kind]

    def in_edges(self, node_id: str, kind: str | None = None) -> list[Edge]:
        self.node(node_id)
        edges = (self._edges[eid] for eid in self._in[node_id])
        return [e for e in edges if kind is None or e.kind == kind]

    def neighbors_undirected(self, node_id: str) -> set[str]:
        """Nodes adjacent via any edge in either direction (deduplicated).

        The node itself is a member only when a self-loop exists, which is
        exactly when it occurs as the far endpoint of one of its own edges.
        """
        self.node(node_id)
        peers = {self._edges[eid].dst for eid in self._out[node_id]}
        peers.update(self._edges[eid].src for eid in self._in[node_id])
        return peers

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    # -- persistence ------------------------------------------------------

    def export_jsonl(self, sink: IO[str]) -> int:
        """Write the snapshot; returns the number of lines written."""
        lines = 0
        for node in sorted(self._nodes.values(), key=lambda n: int(n.id[1:])):
            sink.write(
                f'{{"t":"node","id":{json.dumps(node.id)},'
                f'"kind":{json.dumps(node.kind, ensure_ascii=False)},'
                f'"props":{props_to_json(node.props)}}}\n'
            )
            lines += 1
        for edge in sorted(self._edges.values(), key=lambda e: int(e.id[1:])):
            sink.write(
                f'{{"t":"edge","id":{json.dumps(edge.id)},'
                f'"kind":{json.dumps(edge.kind, ensure_ascii=False)},'
                f'"src":{json.dumps(edge.src)},"dst":{json.dumps(edge.dst)},'
                f'"props":{props_to_json(edge.props)}}}\n'
            )
            lines += 1
        return lines

    def export_jsonl_text(self) -> str:
        import io

        buffer = io.StringIO()
        self.export_jsonl(buffer)
        return buffer.getvalue()

    @classmethod
    def import_jsonl(cls, source: IO[str] | Iterable[str]) -> "Graph":
        graph = cls()
        for lineno, line in enumerate(source, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            where = f"line {lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", where) from None
            if not isinstance(obj, dict):
                raise ParseError("expected a JSON object", where)
            tag = obj.get("t")
            if tag == "node":
                graph._import_node(obj, where)
            elif tag == "edge":
                graph._import_edge(obj, where)
            else:
                raise ParseError(f'unknown record tag: {tag!r}', where)
        return graph

    def _import_node(self, obj: dict, where: str) -> None:
        node_id, props = _record_fields(obj, ("t", "id", "kind", "props"), where)
        if not node_id.startswith("n") or not node_id[1:].isdigit():
            raise ParseError(f"bad node id: {node_id!r}", where)
        if node_id in self._nodes:
            raise ParseError(f"duplicate node id: {node_id}", where)
        self._nodes[node_id] = Node(node_id, obj["kind"], props)
        self._out[node_id] = []
        self._in[node_id] = []
        self._next_node = max(self._next_node, int(node_id[1:]) + 1)

    def _import_edge(self, obj: dict, where: str) -> None:
        edge_id, props = _record_fields(obj, ("t", "id", "kind", "src", "dst", "props"), where)
        if not edge_id.startswith("e") or not edge_id[1:].isdigit():
            raise ParseError(f"bad edge id: {edge_id!r}", where)
        if edge_id in self._edges:
            raise ParseError(f"duplicate edge id: {edge_id}", where)
        src, dst = obj["src"], obj["dst"]
        for endpoint in (src, dst):
            if endpoint not in self._nodes:
                raise ParseError(f"edge {edge_id} before endpoint {endpoint}", where)
        self._edges[edge_id] = Edge(edge_id, obj["kind"], src, dst, props)
        self._out[src].append(edge_id)
        self._in[dst].append(edge_id)
        self._next_edge = max(self._next_edge, int(edge_id[1:]) + 1)


def _record_fields(obj: dict, expected: tuple[str, ...], where: str) -> tuple[str, dict]:
    if set(obj) != set(expected):
        raise ParseError(
            f"record keys {sorted(obj)} do not match expected {sorted(expected)}", where
        )
    for key in expected:
        if key != "props" and not isinstance(obj[key], str):
            raise ParseError(f'field "{key}" must be a string', where)
    if not isinstance(obj["props"], dict):
        raise ParseError('field "props" must be an object', where)
    try:
        props = {key: value_from_json(raw) for key, raw in obj["props"].items()}
    except InvalidArgumentError as exc:
        raise ParseError(str(exc), where) from None
    return obj["id"], props
