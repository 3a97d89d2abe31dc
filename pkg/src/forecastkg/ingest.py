"""Parse shipment/forecast/relevance files and build the graph entities.

Shared entities (materials, clients, features, models, use cases) are
deduplicated by their identifying property across the whole graph, so
re-ingesting related batches links into the existing nodes. Batches are
all-or-nothing: the planned writes are validated against the schema before
the first node is created.
"""

from __future__ import annotations

import csv
import datetime
import io
import json
import math
from dataclasses import dataclass
from typing import IO, Iterable

from .errors import ParseError, SchemaViolationError, UnknownIdError
from .explain import rank_features
from .graph import Graph
from .schema import SchemaSpec, validate_edge, validate_node
from .values import parse_iso_date

SHIPMENTS_HEADER = ["date", "material_id", "client_id", "quantity"]

FORECAST_FIELDS = (
    "forecast_id",
    "model_id",
    "use_case",
    "material_id",
    "client_id",
    "target_date",
    "created_at",
    "quantity",
)


@dataclass(frozen=True)
class ShipmentRecord:
    date: datetime.date
    material_id: str
    client_id: str
    quantity: float


@dataclass(frozen=True)
class ForecastRecord:
    forecast_id: str
    model_id: str
    use_case: str
    material_id: str
    client_id: str
    target_date: datetime.date
    created_at: datetime.date
    quantity: float


@dataclass(frozen=True)
class RelevanceRecord:
    forecast_id: str
    feature: str
    weight: float


# -- parsers -------------------------------------------------------------


def parse_shipments_csv(source: IO[str] | str) -> list[ShipmentRecord]:
    """Strict CSV: exact header, YYYY-MM-DD dates, non-negative quantities.

    Row numbers in errors count the header as row 1.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(f"missing header; expected {','.join(SHIPMENTS_HEADER)}") from None
    if header != SHIPMENTS_HEADER:
        raise ParseError(
            f"bad header {','.join(header)}; expected {','.join(SHIPMENTS_HEADER)}",
            "row 1",
        )
    records = []
    for rownum, row in enumerate(reader, start=2):
        where = f"row {rownum}"
        if not row:
            continue
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, got {len(row)}", where)
        date_text, material_id, client_id, quantity_text = row
        date = parse_iso_date(date_text)
        if date is None:
            raise ParseError(f"invalid date: {date_text!r}", where)
        if not material_id or not client_id:
            raise ParseError("material_id and client_id must be non-empty", where)
        quantity = _parse_quantity(quantity_text, where)
        records.append(ShipmentRecord(date, material_id, client_id, quantity))
    return records


def parse_forecasts_json(source: IO[str] | str) -> list[ForecastRecord]:
    """JSON array of objects carrying exactly the forecast record fields."""
    text = source if isinstance(source, str) else source.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from None
    if not isinstance(doc, list):
        raise ParseError("expected a JSON array of forecast objects")
    records = []
    seen_ids: set[str] = set()
    for index, item in enumerate(doc, start=1):
        where = f"element {index}"
        if not isinstance(item, dict):
            raise ParseError("expected a JSON object", where)
        if set(item) != set(FORECAST_FIELDS):
            raise ParseError(
                f"fields {sorted(item)} do not match expected {sorted(FORECAST_FIELDS)}",
                where,
            )
        for key in ("forecast_id", "model_id", "use_case", "material_id", "client_id"):
            if not isinstance(item[key], str) or not item[key]:
                raise ParseError(f'"{key}" must be a non-empty string', where)
        if item["forecast_id"] in seen_ids:
            raise ParseError(f'duplicate forecast_id "{item["forecast_id"]}"', where)
        seen_ids.add(item["forecast_id"])
        dates = {}
        for key in ("target_date", "created_at"):
            if not isinstance(item[key], str) or parse_iso_date(item[key]) is None:
                raise ParseError(f'"{key}" must be a YYYY-MM-DD date', where)
            dates[key] = parse_iso_date(item[key])
        if isinstance(item["quantity"], bool) or not isinstance(item["quantity"], (int, float)):
            raise ParseError('"quantity" must be a number', where)
        quantity = _parse_quantity(item["quantity"], where)
        records.append(
            ForecastRecord(
                forecast_id=item["forecast_id"],
                model_id=item["model_id"],
                use_case=item["use_case"],
                material_id=item["material_id"],
                client_id=item["client_id"],
                target_date=dates["target_date"],
                created_at=dates["created_at"],
                quantity=quantity,
            )
        )
    return records


def parse_relevance_jsonl(source: IO[str] | str | Iterable[str]) -> list[RelevanceRecord]:
    """One {"forecast_id","feature","weight"} object per line."""
    if isinstance(source, str):
        source = io.StringIO(source)
    records = []
    seen: set[tuple[str, str]] = set()
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        where = f"line {lineno}"
        try:
            item = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", where) from None
        if not isinstance(item, dict) or set(item) != {"forecast_id", "feature", "weight"}:
            raise ParseError(
                'expected an object with fields "forecast_id", "feature", "weight"', where
            )
        forecast_id, feature = item["forecast_id"], item["feature"]
        if not isinstance(forecast_id, str) or not forecast_id:
            raise ParseError('"forecast_id" must be a non-empty string', where)
        if not isinstance(feature, str) or not feature:
            raise ParseError('"feature" must be a non-empty string', where)
        weight = item["weight"]
        if isinstance(weight, bool) or not isinstance(weight, (int, float)):
            raise ParseError('"weight" must be a number', where)
        weight = float(weight)
        if not math.isfinite(weight):
            raise ParseError(f"weight must be finite, got {weight}", where)
        key = (forecast_id, feature)
        if key in seen:
            raise ParseError(f"duplicate (forecast_id, feature): {key}", where)
        seen.add(key)
        records.append(RelevanceRecord(forecast_id, feature, weight))
    return records


def _parse_quantity(raw, where: str) -> float:
    if isinstance(raw, bool):
        raise ParseError("quantity must be a number", where)
    try:
        quantity = float(raw)
    except (TypeError, ValueError):
        raise ParseError(f"invalid quantity: {raw!r}", where) from None
    if not math.isfinite(quantity):
        raise ParseError(f"quantity must be finite, got {quantity}", where)
    if quantity < 0:
        raise ParseError(f"quantity must be non-negative, got {raw}", where)
    return quantity


# -- batch writing ---------------------------------------------------------


class _BatchWriter:
    """Collects planned nodes/edges, validates them all, then writes.

    Planned entities use negative placeholder ids so edges can reference
    nodes that do not exist yet; ids are resolved on commit.
    """

    def __init__(self, graph: Graph, schema: SchemaSpec):
        self.graph = graph
        self.schema = schema
        self._nodes: list[tuple[int, str, dict]] = []
        self._edges: list[tuple[str, int | str, int | str, dict]] = []
        self._next_placeholder = -1

    def plan_node(self, kind: str, props: dict) -> int:
        placeholder = self._next_placeholder
        self._next_placeholder -= 1
        self._nodes.append((placeholder, kind, props))
        return placeholder

    def plan_edge(self, kind: str, src: int | str, dst: int | str, props: dict | None = None):
        self._edges.append((kind, src, dst, props or {}))

    def commit(self) -> tuple[int, int]:
        violations = []
        kinds = {placeholder: kind for placeholder, kind, _ in self._nodes}
        for _, kind, props in self._nodes:
            violations.extend(validate_node(self.schema, kind, props))
        for kind, src, dst, props in self._edges:
            src_kind = kinds[src] if isinstance(src, int) else self.graph.node(src).kind
            dst_kind = kinds[dst] if isinstance(dst, int) else self.graph.node(dst).kind
            violations.extend(validate_edge(self.schema, kind, src_kind, dst_kind, props))
        if violations:
            raise SchemaViolationError(violations)
        ids: dict[int, str] = {}
        for placeholder, kind, props in self._nodes:
            ids[placeholder] = self.graph.add_node(kind, props)
        for kind, src, dst, props in self._edges:
            self.graph.add_edge(
                kind,
                ids[src] if isinstance(src, int) else src,
                ids[dst] if isinstance(dst, int) else dst,
                props,
            )
        return len(self._nodes), len(self._edges)

    # -- graph-wide dedup lookups ------------------------------------

    def existing_by_prop(self, kind: str, prop: str) -> dict[str, str]:
        return {
            node.props[prop]: node.id
            for node in self.graph.nodes_of_kind(kind)
            if prop in node.props
        }


def _resolve(
    writer: _BatchWriter, cache: dict[str, int | str], kind: str, prop: str, value: str
) -> int | str:
    """Existing node id, or a placeholder planned exactly once per value."""
    if value not in cache:
        cache[value] = writer.plan_node(kind, {prop: value})
    return cache[value]


def ingest_shipments(
    graph: Graph, schema: SchemaSpec, records: list[ShipmentRecord]
) -> tuple[int, int]:
    """Returns (nodes added, edges added)."""
    writer = _BatchWriter(graph, schema)
    materials = dict(writer.existing_by_prop("Material", "code"))
    clients = dict(writer.existing_by_prop("Client", "code"))
    for record in records:
        material = _resolve(writer, materials, "Material", "code", record.material_id)
        client = _resolve(writer, clients, "Client", "code", record.client_id)
        shipment = writer.plan_node(
            "Shipment", {"date": record.date, "quantity": record.quantity}
        )
        writer.plan_edge("FOR_MATERIAL", shipment, material)
        writer.plan_edge("FOR_CLIENT", shipment, client)
    return writer.commit()


def ingest_forecasts(
    graph: Graph, schema: SchemaSpec, records: list[ForecastRecord]
) -> tuple[int, int]:
    """Returns (nodes added, edges added).

    The external forecast_id is kept as a ``source_id`` property so later
    relevance batches (and API clients) can address the forecast.
    """
    writer = _BatchWriter(graph, schema)
    models = dict(writer.existing_by_prop("AIModel", "name"))
    use_cases = dict(writer.existing_by_prop("UseCase", "name"))
    materials = dict(writer.existing_by_prop("Material", "code"))
    clients = dict(writer.existing_by_prop("Client", "code"))
    existing_sources = writer.existing_by_prop("Forecast", "source_id")
    serves_seen = {
        (edge.src, edge.dst)
        for edge in graph.edges()
        if edge.kind == "SERVES"
    }
    serves_planned: set[tuple[int | str, int | str]] = set()
    for record in records:
        if record.forecast_id in existing_sources:
            raise ParseError(
                f'forecast_id "{record.forecast_id}" already present in the graph'
            )
        model = _resolve(writer, models, "AIModel", "name", record.model_id)
        use_case = _resolve(writer, use_cases, "UseCase", "name", record.use_case)
        material = _resolve(writer, materials, "Material", "code", record.material_id)
        client = _resolve(writer, clients, "Client", "code", record.client_id)
        pair = (model, use_case)
        already_linked = (
            isinstance(model, str) and isinstance(use_case, str) and pair in serves_seen
        )
        if pair not in serves_planned and not already_linked:
            writer.plan_edge("SERVES", model, use_case)
            serves_planned.add(pair)
        forecast = writer.plan_node(
            "Forecast",
            {
                "target_date": record.target_date,
                "created_at": record.created_at,
                "quantity": record.quantity,
                "source_id": record.forecast_id,
            },
        )
        writer.plan_edge("PRODUCED", model, forecast)
        writer.plan_edge("FOR_MATERIAL", forecast, material)
        writer.plan_edge("FOR_CLIENT", forecast, client)
    return writer.commit()


def ingest_relevance(
    graph: Graph, schema: SchemaSpec, records: list[RelevanceRecord]
) -> tuple[int, int]:
    """Returns (nodes added, edges added).

    Ranks are frozen here, per forecast, by descending |weight| with ties
    broken by feature name; explanations later read them back untouched.
    """
    writer = _BatchWriter(graph, schema)
    forecasts = writer.existing_by_prop("Forecast", "source_id")
    features = dict(writer.existing_by_prop("Feature", "name"))
    per_forecast: dict[str, list[RelevanceRecord]] = {}
    for record in records:
        if record.forecast_id not in forecasts:
            raise UnknownIdError(
                f'unknown forecast_id "{record.forecast_id}"', record.forecast_id
            )
        per_forecast.setdefault(record.forecast_id, []).append(record)
    ranks: dict[tuple[str, str], int] = {}
    for forecast_id, group in per_forecast.items():
        ranked = rank_features([(r.feature, r.weight) for r in group])
        ranks.update(((forecast_id, rf.feature), rf.rank) for rf in ranked)
    for record in records:
        feature = _resolve(writer, features, "Feature", "name", record.feature)
        relevance = writer.plan_node(
            "FeatureRelevance",
            {"weight": record.weight, "rank": ranks[(record.forecast_id, record.feature)]},
        )
        writer.plan_edge("HAS_RELEVANCE", forecasts[record.forecast_id], relevance)
        writer.plan_edge("OF_FEATURE", relevance, feature)
    return writer.commit()
