"""Immutable user feedback and actions, aggregation, and synthetic data.

Feedback attaches to forecasts, explanations, decision options, or
relevance judgments. Synthetic feedback reproduces a reviewer population
deterministically from a seed, so two runs over the same snapshot yield
byte-identical graphs.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field

from .errors import InvalidArgumentError, SchemaViolationError, UnknownIdError
from .graph import Graph
from .rng import SplitMix64
from .schema import FEEDBACK_TARGET_KINDS, SchemaSpec, validate_edge, validate_node

ACTION_KINDS = ("accepted", "rejected", "modified")

#: node kinds the synthetic pass iterates, in this order of coverage keys
SYNTH_TARGET_KINDS = ("Forecast", "DecisionOption", "FeatureRelevance")

EPOCH = datetime.date(1970, 1, 1)


@dataclass(frozen=True)
class FeedbackSummary:
    target: str
    count: int
    mean_rating: float
    histogram: tuple[int, int, int, int, int]


@dataclass(frozen=True)
class SynthConfig:
    seed: int
    coverage: dict[str, float] = field(default_factory=dict)
    annotator: str = "synthetic-annotator"

    def __post_init__(self):
        for kind, fraction in self.coverage.items():
            if kind not in SYNTH_TARGET_KINDS:
                raise InvalidArgumentError(
                    f"coverage kind must be one of {', '.join(SYNTH_TARGET_KINDS)}, got {kind}"
                )
            if not 0.0 <= fraction <= 1.0:
                raise InvalidArgumentError(f"coverage for {kind} out of [0, 1]: {fraction}")

    def coverage_of(self, kind: str) -> float:
        return self.coverage.get(kind, 0.0)


def record_feedback(
    graph: Graph,
    schema: SchemaSpec,
    user_id: str,
    target_id: str,
    rating: int,
    comment: str = "",
    created_at: datetime.date | None = None,
) -> str:
    """Create a Feedback node plus its ABOUT and GAVE edges; returns the node id."""
    if not isinstance(rating, int) or isinstance(rating, bool) or not 1 <= rating <= 5:
        raise InvalidArgumentError(f"rating must be an integer in 1..5, got {rating!r}")
    user = graph.node(user_id)
    if user.kind != "User":
        raise InvalidArgumentError(f"{user_id} is a {user.kind}, not a User")
    target = graph.node(target_id)
    if target.kind not in FEEDBACK_TARGET_KINDS:
        raise InvalidArgumentError(
            f"feedback target must be one of {', '.join(FEEDBACK_TARGET_KINDS)}, "
            f"got {target.kind}"
        )
    props = {
        "rating": rating,
        "comment": comment,
        "created_at": created_at or datetime.date.today(),
    }
    violations = list(validate_node(schema, "Feedback", props))
    violations += validate_edge(schema, "ABOUT", "Feedback", target.kind, {})
    violations += validate_edge(schema, "GAVE", "User", "Feedback", {})
    if violations:
        raise SchemaViolationError(violations)
    feedback_id = graph.add_node("Feedback", props)
    graph.add_edge("ABOUT", feedback_id, target_id)
    graph.add_edge("GAVE", user_id, feedback_id)
    return feedback_id


def record_action(
    graph: Graph,
    schema: SchemaSpec,
    user_id: str,
    option_id: str,
    kind: str,
    created_at: datetime.date | None = None,
) -> str:
    """Create an Action node plus its TOOK and SELECTED edges; returns the node id."""
    if kind not in ACTION_KINDS:
        raise InvalidArgumentError(
            f"action kind must be one of {', '.join(ACTION_KINDS)}, got {kind!r}"
        )
    user = graph.node(user_id)
    if user.kind != "User":
        raise InvalidArgumentError(f"{user_id} is a {user.kind}, not a User")
    option = graph.node(option_id)
    if option.kind != "DecisionOption":
        raise InvalidArgumentError(f"{option_id} is a {option.kind}, not a DecisionOption")
    props = {"kind": kind, "created_at": created_at or datetime.date.today()}
    violations = list(validate_node(schema, "Action", props))
    violations += validate_edge(schema, "TOOK", "User", "Action", {})
    violations += validate_edge(schema, "SELECTED", "Action", "DecisionOption", {})
    if violations:
        raise SchemaViolationError(violations)
    action_id = graph.add_node("Action", props)
    graph.add_edge("TOOK", user_id, action_id)
    graph.add_edge("SELECTED", action_id, option_id)
    return action_id


def summarize_feedback(graph: Graph, target_id: str) -> FeedbackSummary:
    """Aggregate every Feedback node pointing at the target via ABOUT."""
    graph.node(target_id)
    histogram = [0, 0, 0, 0, 0]
    for edge in graph.in_edges(target_id, "ABOUT"):
        source = graph.node(edge.src)
        if source.kind == "Feedback":
            histogram[source.props["rating"] - 1] += 1
    count = sum(histogram)
    mean = (
        sum(rating * n for rating, n in enumerate(histogram, start=1)) / count
        if count
        else 0.0
    )
    return FeedbackSummary(target_id, count, mean, tuple(histogram))


def ensure_user(graph: Graph, schema: SchemaSpec, name: str) -> str:
    """Find the User node with this name, creating it if absent."""
    if not name:
        raise InvalidArgumentError("user name must be non-empty")
    for node in graph.nodes_of_kind("User"):
        if node.props.get("name") == name:
            return node.id
    violations = validate_node(schema, "User", {"name": name})
    if violations:
        raise SchemaViolationError(violations)
    return graph.add_node("User", {"name": name})


def synthesize_feedback(graph: Graph, schema: SchemaSpec, config: SynthConfig) -> int:
    """Deterministic simulated reviews; returns the number created.

    Walks the eligible kinds' nodes in ascending id order, consuming one
    generator draw per node: the low bits decide coverage, bits 32+ the
    rating. The draw happens for every eligible node, so coverage values
    do not shift which node sees which draw.
    """
    user_id = ensure_user(graph, schema, config.annotator)
    generator = SplitMix64(config.seed)
    created = 0
    targets = [node for node in graph.nodes() if node.kind in SYNTH_TARGET_KINDS]
    for node in targets:
        draw = generator.next_u64()
        if (draw % 1000) / 1000 < config.coverage_of(node.kind):
            rating = 1 + ((draw >> 32) % 5)
            record_feedback(graph, schema, user_id, node.id, rating, "", EPOCH)
            created += 1
    return created
