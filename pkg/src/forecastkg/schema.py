"""The graph's kind system: node kinds, edge kinds, and validation.

A schema is closed-world: nodes and edges of kinds it does not declare are
rejected. Required properties are checked by name and value type; extra
properties pass (the graph is meant to be enriched over time with data the
schema does not know about yet).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ParseError
from .values import TYPE_NAMES, PropertyValue, type_name_of


@dataclass(frozen=True)
class Violation:
    """One validation failure. ``prop`` is empty for kind-level failures."""

    kind: str
    prop: str
    message: str

    def __str__(self) -> str:
        return self.message


@dataclass(frozen=True)
class NodeKindSpec:
    name: str
    required_props: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class EdgeKindSpec:
    name: str
    endpoints: tuple[tuple[str, str], ...] = ()
    required_props: dict[str, str] = field(default_factory=dict)


class SchemaSpec:
    """Immutable after construction; safe to share across threads."""

    def __init__(self, node_kinds: list[NodeKindSpec], edge_kinds: list[EdgeKindSpec]):
        self.node_kinds = list(node_kinds)
        self.edge_kinds = list(edge_kinds)
        self._nodes_by_name = {spec.name: spec for spec in self.node_kinds}
        self._edges_by_name = {spec.name: spec for spec in self.edge_kinds}
        if len(self._nodes_by_name) != len(self.node_kinds):
            raise ParseError("duplicate node kind name in schema")
        if len(self._edges_by_name) != len(self.edge_kinds):
            raise ParseError("duplicate edge kind name in schema")
        for edge in self.edge_kinds:
            for src, dst in edge.endpoints:
                for name in (src, dst):
                    if name not in self._nodes_by_name:
                        raise ParseError(
                            f'edge kind "{edge.name}" references undeclared node kind "{name}"'
                        )

    def node_kind(self, name: str) -> NodeKindSpec | None:
        return self._nodes_by_name.get(name)

    def edge_kind(self, name: str) -> EdgeKindSpec | None:
        return self._edges_by_name.get(name)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SchemaSpec)
            and self.node_kinds == other.node_kinds
            and self.edge_kinds == other.edge_kinds
        )


def validate_node(
    schema: SchemaSpec, kind: str, props: dict[str, PropertyValue]
) -> list[Violation]:
    """Empty list means valid. Violations are ordered by (prop, kind)."""
    spec = schema.node_kind(kind)
    if spec is None:
        return [Violation(kind, "", f'unknown node kind "{kind}"')]
    return _check_required(kind, spec.required_props, props)


def validate_edge(
    schema: SchemaSpec,
    kind: str,
    src_kind: str,
    dst_kind: str,
    props: dict[str, PropertyValue],
) -> list[Violation]:
    spec = schema.edge_kind(kind)
    if spec is None:
        return [Violation(kind, "", f'unknown edge kind "{kind}"')]
    violations = []
    if (src_kind, dst_kind) not in spec.endpoints:
        violations.append(
            Violation(
                kind,
                "",
                f'edge kind "{kind}" does not allow {src_kind} -> {dst_kind}',
            )
        )
    violations.extend(_check_required(kind, spec.required_props, props))
    violations.sort(key=lambda v: (v.prop, v.kind))
    return violations


def _check_required(
    kind: str, required: dict[str, str], props: dict[str, PropertyValue]
) -> list[Violation]:
    violations = []
    for prop, expected in sorted(required.items()):
        if prop not in props:
            violations.append(
                Violation(kind, prop, f'{kind}: missing required property "{prop}"')
            )
        else:
            actual = type_name_of(props[prop])
            if actual != expected:
                violations.append(
                    Violation(
                        kind,
                        prop,
                        f'{kind}.{prop}: expected {expected}, got {actual}',
                    )
                )
    return violations


# -- descriptor serialization -------------------------------------------------


def dump_schema(schema: SchemaSpec) -> str:
    doc = {
        "node_kinds": [
            {"name": spec.name, "required_props": dict(spec.required_props)}
            for spec in schema.node_kinds
        ],
        "edge_kinds": [
            {
                "name": spec.name,
                "endpoints": [list(pair) for pair in spec.endpoints],
                "required_props": dict(spec.required_props),
            }
            for spec in schema.edge_kinds
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_schema(text: str) -> SchemaSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid schema JSON: {exc.msg}", f"line {exc.lineno}") from None
    if not isinstance(doc, dict):
        raise ParseError("schema descriptor must be a JSON object")
    node_kinds = [
        _load_node_kind(item, i) for i, item in enumerate(_kind_list(doc, "node_kinds"), 1)
    ]
    edge_kinds = [
        _load_edge_kind(item, i) for i, item in enumerate(_kind_list(doc, "edge_kinds"), 1)
    ]
    return SchemaSpec(node_kinds, edge_kinds)


def _kind_list(doc: dict, key: str) -> list:
    value = doc.get(key, [])
    if not isinstance(value, list):
        raise ParseError(f'"{key}" must be an array')
    return value


def _load_node_kind(item, index: int) -> NodeKindSpec:
    where = f"node_kinds[{index}]"
    name = _required_str(item, "name", where)
    return NodeKindSpec(name, _load_required_props(item, where))


def _load_edge_kind(item, index: int) -> EdgeKindSpec:
    where = f"edge_kinds[{index}]"
    name = _required_str(item, "name", where)
    raw_endpoints = item.get("endpoints", [])
    if not isinstance(raw_endpoints, list):
        raise ParseError('"endpoints" must be an array', where)
    endpoints = []
    for pair in raw_endpoints:
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(p, str) for p in pair)
        ):
            raise ParseError(f"endpoint pair must be [src, dst]: {pair!r}", where)
        endpoints.append((pair[0], pair[1]))
    return EdgeKindSpec(name, tuple(endpoints), _load_required_props(item, where))


def _required_str(item, key: str, where: str) -> str:
    if not isinstance(item, dict) or not isinstance(item.get(key), str) or not item[key]:
        raise ParseError(f'missing or invalid "{key}"', where)
    return item[key]


def _load_required_props(item: dict, where: str) -> dict[str, str]:
    raw = item.get("required_props", {})
    if not isinstance(raw, dict):
        raise ParseError('"required_props" must be an object', where)
    for prop, type_name in raw.items():
        if type_name not in TYPE_NAMES:
            raise ParseError(
                f'property "{prop}" has unknown type "{type_name}"'
                f" (expected one of {', '.join(TYPE_NAMES)})",
                where,
            )
    return dict(raw)


# -- the built-in kind system --------------------------------------------------

# Node kinds of the demand-forecasting graph. Relevance judgments and
# feedback are nodes, not edge properties, so that feedback can point at
# them like at any other entity.
_BUILTIN_NODE_KINDS = [
    ("UseCase", {"name": "text"}),
    ("AIModel", {"name": "text"}),
    ("Material", {"code": "text"}),
    ("Client", {"code": "text"}),
    ("Shipment", {"date": "date", "quantity": "decimal"}),
    ("Forecast", {"target_date": "date", "created_at": "date", "quantity": "decimal"}),
    ("Feature", {"name": "text"}),
    ("FeatureRelevance", {"weight": "decimal", "rank": "integer"}),
    ("ForecastExplanation", {"k": "integer", "text": "text"}),
    ("DecisionOption", {"action": "text", "rank": "integer", "deviation": "decimal"}),
    ("Feedback", {"rating": "integer", "comment": "text", "created_at": "date"}),
    ("User", {"name": "text"}),
    ("Action", {"kind": "text", "created_at": "date"}),
]

_BUILTIN_EDGE_KINDS = [
    ("SERVES", [("AIModel", "UseCase")]),
    ("PRODUCED", [("AIModel", "Forecast")]),
    ("FOR_MATERIAL", [("Forecast", "Material"), ("Shipment", "Material")]),
    ("FOR_CLIENT", [("Forecast", "Client"), ("Shipment", "Client")]),
    ("HAS_RELEVANCE", [("Forecast", "FeatureRelevance")]),
    ("OF_FEATURE", [("FeatureRelevance", "Feature")]),
    ("EXPLAINED_BY", [("Forecast", "ForecastExplanation")]),
    ("BASED_ON", [("ForecastExplanation", "FeatureRelevance")]),
    ("SUGGESTS", [("Forecast", "DecisionOption")]),
    (
        "ABOUT",
        [
            ("Feedback", "Forecast"),
            ("Feedback", "ForecastExplanation"),
            ("Feedback", "DecisionOption"),
            ("Feedback", "FeatureRelevance"),
        ],
    ),
    ("GAVE", [("User", "Feedback")]),
    ("TOOK", [("User", "Action")]),
    ("SELECTED", [("Action", "DecisionOption")]),
]

FEEDBACK_TARGET_KINDS = ("Forecast", "ForecastExplanation", "DecisionOption", "FeatureRelevance")


def builtin_schema() -> SchemaSpec:
    """The bundled demand-forecasting kind system (13 node and 13 edge kinds)."""
    return SchemaSpec(
        [NodeKindSpec(name, dict(props)) for name, props in _BUILTIN_NODE_KINDS],
        [EdgeKindSpec(name, tuple(pairs)) for name, pairs in _BUILTIN_EDGE_KINDS],
    )
