import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from forecastkg import builtin_schema
from forecastkg.graph import Graph
from forecastkg import ingest

import synthdata


@pytest.fixture
def schema():
    return builtin_schema()


@pytest.fixture
def empty_graph():
    return Graph()


@pytest.fixture
def path3_graph():
    g = Graph()
    a = g.add_node("Item", {"name": "a"})
    b = g.add_node("Item", {"name": "b"})
    c = g.add_node("Item", {"name": "c"})
    g.add_edge("LINK", a, b)
    g.add_edge("LINK", b, c)
    return g


@pytest.fixture
def pipeline_graph(schema):
    """Synthetic dataset ingested (shipments + forecasts + relevance)."""
    g = Graph()
    ingest.ingest_shipments(g, schema, ingest.parse_shipments_csv(synthdata.shipments_csv()))
    ingest.ingest_forecasts(g, schema, ingest.parse_forecasts_json(synthdata.forecasts_json()))
    ingest.ingest_relevance(g, schema, ingest.parse_relevance_jsonl(synthdata.relevance_jsonl()))
    return g
