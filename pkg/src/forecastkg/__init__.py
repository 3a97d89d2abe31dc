"""forecastkg: a knowledge graph of demand forecasts, their explanations,
heuristic decision options, and user feedback, with exact and sampled
graph-structure metrics.

The usual entry points:

    from forecastkg import Graph, builtin_schema
    from forecastkg.ingest import parse_shipments_csv, ingest_shipments
    from forecastkg.metrics import exact_metrics, sampled_metrics
"""

from importlib import resources

from .graph import Edge, Graph, Node
from .schema import SchemaSpec, builtin_schema, dump_schema, load_schema

__version__ = "0.1.0"

__all__ = [
    "Edge",
    "Graph",
    "Node",
    "SchemaSpec",
    "builtin_schema",
    "dump_schema",
    "load_schema",
    "bundled_data",
]


def bundled_data(name: str) -> str:
    """Text of one of the data files shipped inside the package."""
    return (resources.files("forecastkg") / "data" / name).read_text(encoding="utf-8")
