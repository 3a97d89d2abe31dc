"""Turn a forecast's ranked feature relevances into a stored explanation.

The explanation text is a fixed template, rendered deterministically, so
two runs over the same graph produce byte-identical nodes. Each forecast
gets at most one explanation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConflictError, InvalidArgumentError, SchemaViolationError
from .graph import Graph
from .schema import SchemaSpec, validate_edge, validate_node
from .values import canonical_decimal, signed_fixed3


@dataclass(frozen=True)
class RankedFeature:
    feature: str
    weight: float
    rank: int


def rank_features(relevances: list[tuple[str, float]]) -> list[RankedFeature]:
    """Order by |weight| descending, ties by name ascending; ranks 1..n."""
    names = [name for name, _ in relevances]
    if len(set(names)) != len(names):
        duplicates = sorted({n for n in names if names.count(n) > 1})
        raise InvalidArgumentError(f"duplicate feature names: {', '.join(duplicates)}")
    for name, weight in relevances:
        if not math.isfinite(weight):
            raise InvalidArgumentError(f'non-finite weight for feature "{name}"')
    ordered = sorted(relevances, key=lambda item: (-abs(item[1]), item[0]))
    return [
        RankedFeature(name, float(weight), rank)
        for rank, (name, weight) in enumerate(ordered, start=1)
    ]


def render_text(
    quantity: float,
    material_code: str,
    client_code: str,
    target_date,
    top_features: list[RankedFeature],
) -> str:
    """The explanation sentence; pure and byte-stable for equal inputs."""
    if top_features:
        influences = "; ".join(
            f"{feature.feature} ({signed_fixed3(feature.weight)}, supporting "
            f"{'higher' if feature.weight >= 0 else 'lower'} demand)"
            for feature in top_features
        ) + "."
    else:
        influences = "none."
    return (
        f"Forecast for material {material_code}, client {client_code} "
        f"on {target_date.isoformat()}: {canonical_decimal(float(quantity))} units. "
        f"Top influences: {influences}"
    )


def relevances_of(graph: Graph, forecast_id: str) -> list[tuple[str, RankedFeature]]:
    """(node id, RankedFeature) for each relevance of a forecast, rank ascending."""
    entries = []
    for edge in graph.out_edges(forecast_id, "HAS_RELEVANCE"):
        relevance = graph.node(edge.dst)
        feature_edges = graph.out_edges(relevance.id, "OF_FEATURE")
        name = graph.node(feature_edges[0].dst).props["name"] if feature_edges else ""
        entries.append(
            (
                relevance.id,
                RankedFeature(name, relevance.props["weight"], relevance.props["rank"]),
            )
        )
    entries.sort(key=lambda item: item[1].rank)
    return entries


def generate_explanation(graph: Graph, schema: SchemaSpec, forecast_id: str, k: int) -> str:
    """Create the ForecastExplanation node for one forecast; returns its id."""
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    forecast = graph.node(forecast_id)
    if forecast.kind != "Forecast":
        raise InvalidArgumentError(f"{forecast_id} is a {forecast.kind}, not a Forecast")
    if graph.out_edges(forecast_id, "EXPLAINED_BY"):
        raise ConflictError(f"forecast {forecast_id} already has an explanation")

    top = relevances_of(graph, forecast_id)[:k]
    material = _linked_code(graph, forecast_id, "FOR_MATERIAL")
    client = _linked_code(graph, forecast_id, "FOR_CLIENT")
    text = render_text(
        forecast.props["quantity"],
        material,
        client,
        forecast.props["target_date"],
        [feature for _, feature in top],
    )

    props = {"k": k, "text": text}
    violations = list(validate_node(schema, "ForecastExplanation", props))
    violations += validate_edge(schema, "EXPLAINED_BY", "Forecast", "ForecastExplanation", {})
    if top:
        violations += validate_edge(
            schema, "BASED_ON", "ForecastExplanation", "FeatureRelevance", {}
        )
    if violations:
        raise SchemaViolationError(violations)

    explanation_id = graph.add_node("ForecastExplanation", props)
    graph.add_edge("EXPLAINED_BY", forecast_id, explanation_id)
    for relevance_id, _ in top:
        graph.add_edge("BASED_ON", explanation_id, relevance_id)
    return explanation_id


def explanation_of(graph: Graph, forecast_id: str) -> str | None:
    edges = graph.out_edges(forecast_id, "EXPLAINED_BY")
    return edges[0].dst if edges else None


def _linked_code(graph: Graph, forecast_id: str, edge_kind: str) -> str:
    edges = graph.out_edges(forecast_id, edge_kind)
    if not edges:
        return "?"
    target = graph.node(edges[0].dst)
    return target.props.get("code", "?")
