"""Heuristic decision options from forecast-vs-baseline deviation.

The baseline is a trailing mean of daily shipped quantity for the same
material and client. Exactly one guard fires per forecast:

    NEW_DEMAND  baseline = 0 and forecast > 0
    STEADY      baseline = 0 and forecast = 0
    SURGE       deviation >= upper  (inclusive)
    DROP        deviation <= lower  (inclusive)
    STEADY      otherwise

where deviation = (forecast - baseline) / baseline. The action lists and
thresholds are config, not code; the defaults ship as a JSON file.
"""

from __future__ import annotations

import datetime
import json
from dataclasses import dataclass, field

from .errors import ConflictError, InvalidArgumentError, ParseError, SchemaViolationError
from .graph import Graph
from .schema import SchemaSpec, validate_edge, validate_node

GUARDS = ("SURGE", "DROP", "NEW_DEMAND", "STEADY")

DEFAULT_RULES = {
    "window_days": 28,
    "upper": 0.2,
    "lower": -0.2,
    "actions": {
        "SURGE": ["increase production capacity", "arrange additional transport"],
        "DROP": ["reduce raw material orders"],
        "NEW_DEMAND": ["review new demand source"],
        "STEADY": ["no action required"],
    },
}


@dataclass(frozen=True)
class Baseline:
    value: float
    window_days: int
    covered_records: int


@dataclass(frozen=True)
class RulesConfig:
    window_days: int = 28
    upper: float = 0.2
    lower: float = -0.2
    actions: dict[str, list[str]] = field(
        default_factory=lambda: {g: list(DEFAULT_RULES["actions"][g]) for g in GUARDS}
    )

    def __post_init__(self):
        if self.window_days < 1:
            raise InvalidArgumentError(f"window_days must be >= 1, got {self.window_days}")
        if not (self.upper > 0 > self.lower):
            raise InvalidArgumentError(
                f"thresholds must satisfy upper > 0 > lower, got {self.upper}/{self.lower}"
            )
        for guard in GUARDS:
            if guard not in self.actions or not self.actions[guard]:
                raise InvalidArgumentError(f"missing actions for guard {guard}")


def load_rules(text: str) -> RulesConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid rules JSON: {exc.msg}", f"line {exc.lineno}") from None
    if not isinstance(doc, dict):
        raise ParseError("rules config must be a JSON object")
    unknown = set(doc) - {"window_days", "upper", "lower", "actions"}
    if unknown:
        raise ParseError(f"unknown rules keys: {sorted(unknown)}")
    merged = {**DEFAULT_RULES, **doc}
    actions = merged["actions"]
    if not isinstance(actions, dict):
        raise ParseError('"actions" must be an object')
    for guard, texts in actions.items():
        if guard not in GUARDS:
            raise ParseError(f"unknown guard {guard!r} (expected one of {', '.join(GUARDS)})")
        if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
            raise ParseError(f"actions for {guard} must be an array of strings")
    full_actions = {g: list(DEFAULT_RULES["actions"][g]) for g in GUARDS}
    full_actions.update({g: list(t) for g, t in actions.items()})
    try:
        return RulesConfig(
            window_days=int(merged["window_days"]),
            upper=float(merged["upper"]),
            lower=float(merged["lower"]),
            actions=full_actions,
        )
    except (TypeError, ValueError):
        raise ParseError("window_days/upper/lower must be numbers") from None
    except InvalidArgumentError as exc:
        raise ParseError(str(exc)) from None


def dump_rules(config: RulesConfig) -> str:
    doc = {
        "window_days": config.window_days,
        "upper": config.upper,
        "lower": config.lower,
        "actions": {g: list(config.actions[g]) for g in GUARDS},
    }
    return json.dumps(doc, indent=2) + "\n"


def compute_baseline(
    graph: Graph,
    material_id: str,
    client_id: str,
    target_date: datetime.date,
    window_days: int,
) -> Baseline:
    """Trailing mean over [target_date - window_days, target_date - 1].

    Days without shipments contribute zero; the divisor is always the
    window length, not the number of records.
    """
    if window_days < 1:
        raise InvalidArgumentError(f"window_days must be >= 1, got {window_days}")
    material = graph.node(material_id)
    client = graph.node(client_id)
    if material.kind != "Material":
        raise InvalidArgumentError(f"{material_id} is a {material.kind}, not a Material")
    if client.kind != "Client":
        raise InvalidArgumentError(f"{client_id} is a {client.kind}, not a Client")
    start = target_date - datetime.timedelta(days=window_days)
    end = target_date - datetime.timedelta(days=1)
    shipments_for_client = {
        edge.src for edge in graph.in_edges(client_id, "FOR_CLIENT")
        if graph.node(edge.src).kind == "Shipment"
    }
    total = 0.0
    covered = 0
    for edge in graph.in_edges(material_id, "FOR_MATERIAL"):
        node = graph.node(edge.src)
        if node.kind != "Shipment" or node.id not in shipments_for_client:
            continue
        if start <= node.props["date"] <= end:
            total += node.props["quantity"]
            covered += 1
    return Baseline(total / window_days, window_days, covered)


def pick_guard(baseline_value: float, forecast_quantity: float, config: RulesConfig) -> tuple[str, float]:
    """Returns (guard, deviation); deviation is 0.0 where undefined."""
    if baseline_value == 0:
        return ("NEW_DEMAND" if forecast_quantity > 0 else "STEADY"), 0.0
    deviation = (forecast_quantity - baseline_value) / baseline_value
    if deviation >= config.upper:
        return "SURGE", deviation
    if deviation <= config.lower:
        return "DROP", deviation
    return "STEADY", deviation


def generate_options(
    graph: Graph, schema: SchemaSpec, forecast_id: str, config: RulesConfig | None = None
) -> list[str]:
    """Create the DecisionOption nodes for one forecast; returns their ids."""
    config = config or RulesConfig()
    forecast = graph.node(forecast_id)
    if forecast.kind != "Forecast":
        raise InvalidArgumentError(f"{forecast_id} is a {forecast.kind}, not a Forecast")
    if graph.out_edges(forecast_id, "SUGGESTS"):
        raise ConflictError(f"forecast {forecast_id} already has decision options")

    material_edges = graph.out_edges(forecast_id, "FOR_MATERIAL")
    client_edges = graph.out_edges(forecast_id, "FOR_CLIENT")
    if not material_edges or not client_edges:
        raise InvalidArgumentError(f"forecast {forecast_id} lacks material/client links")
    baseline = compute_baseline(
        graph,
        material_edges[0].dst,
        client_edges[0].dst,
        forecast.props["target_date"],
        config.window_days,
    )
    guard, deviation = pick_guard(baseline.value, forecast.props["quantity"], config)

    planned = [
        {"action": action, "rank": rank, "deviation": deviation}
        for rank, action in enumerate(config.actions[guard], start=1)
    ]
    violations = []
    for props in planned:
        violations.extend(validate_node(schema, "DecisionOption", props))
    violations.extend(validate_edge(schema, "SUGGESTS", "Forecast", "DecisionOption", {}))
    if violations:
        raise SchemaViolationError(violations)

    option_ids = []
    for props in planned:
        option_id = graph.add_node("DecisionOption", props)
        graph.add_edge("SUGGESTS", forecast_id, option_id)
        option_ids.append(option_id)
    return option_ids
