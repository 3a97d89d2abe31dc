"""Command-line front end over a snapshot file.

Every state-bearing subcommand loads the snapshot, applies the operation,
and writes the file back atomically (temp file + rename). Machine-readable
JSON goes to stdout, diagnostics to stderr.

Exit codes: 0 success, 1 usage, 2 data/parse, 3 schema violation,
4 unknown id or conflict.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import bundled_data, decide, explain, feedback, ingest, metrics
from .errors import (
    ConflictError,
    ForecastKGError,
    InvalidArgumentError,
    ParseError,
    SchemaViolationError,
    UnknownIdError,
)
from .graph import Graph
from .schema import SchemaSpec, builtin_schema, load_schema

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_SCHEMA = 3
EXIT_UNKNOWN = 4


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="forecastkg")
    parser.add_argument(
        "--graph", default="graph.jsonl", help="snapshot file (default: graph.jsonl)"
    )
    parser.add_argument("--schema", default=None, help="schema descriptor file (default: builtin)")
    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser("ingest", help="ingest shipments/forecasts/relevance files")
    cmd.add_argument("--shipments", help="shipments CSV file")
    cmd.add_argument("--forecasts", help="forecasts JSON file")
    cmd.add_argument("--relevance", help="relevance JSONL file")

    cmd = commands.add_parser("explain", help="generate explanations for unexplained forecasts")
    cmd.add_argument("--k", type=int, default=3, help="features per explanation (default 3)")

    cmd = commands.add_parser("options", help="generate decision options for forecasts")
    cmd.add_argument("--rules", help="rules config JSON file (default: bundled)")

    cmd = commands.add_parser("synth-feedback", help="create deterministic synthetic feedback")
    cmd.add_argument("--seed", type=int, required=True)
    cmd.add_argument("--coverage-forecast", type=float, default=0.0)
    cmd.add_argument("--coverage-option", type=float, default=0.0)
    cmd.add_argument("--coverage-relevance", type=float, default=0.0)
    cmd.add_argument("--annotator", default="synthetic-annotator")

    cmd = commands.add_parser("metrics", help="print graph metrics JSON")
    cmd.add_argument("--sample", type=float, default=None, help="sample fraction in (0, 1]")
    cmd.add_argument("--seed", type=int, default=0)

    cmd = commands.add_parser("export", help="write the snapshot to a file")
    cmd.add_argument("--out", required=True)

    commands.add_parser("schema", help="print the active schema descriptor")

    cmd = commands.add_parser("serve", help="run the HTTP API")
    cmd.add_argument("--port", type=int, default=8000)
    cmd.add_argument("--k", type=int, default=3, help="default explanation k")
    cmd.add_argument("--rules", help="rules config JSON file (default: bundled)")

    return parser


def _load_graph(path: str) -> Graph:
    if not os.path.exists(path):
        return Graph()
    with open(path, encoding="utf-8") as fh:
        return Graph.import_jsonl(fh)


def _save_graph(graph: Graph, path: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, temp_path = tempfile.mkstemp(prefix=".graph-", suffix=".jsonl", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            graph.export_jsonl(fh)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise


def _load_schema_arg(path: str | None) -> SchemaSpec:
    if path is None:
        return builtin_schema()
    with open(path, encoding="utf-8") as fh:
        return load_schema(fh.read())


def _load_rules_arg(path: str | None) -> decide.RulesConfig:
    if path is None:
        return decide.load_rules(bundled_data("default_rules.json"))
    with open(path, encoding="utf-8") as fh:
        return decide.load_rules(fh.read())


def _emit(doc) -> None:
    print(json.dumps(doc))


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SchemaViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (UnknownIdError, ConflictError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ForecastKGError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def _dispatch(args) -> int:
    schema = _load_schema_arg(args.schema)

    if args.command == "schema":
        from .schema import dump_schema

        sys.stdout.write(dump_schema(schema))
        return EXIT_OK

    if args.command == "metrics":
        graph = _load_graph(args.graph)
        if args.sample is None:
            result = metrics.exact_metrics(graph)
        else:
            result = metrics.sampled_metrics(graph, args.sample, args.seed)
        _emit(result.to_dict())
        return EXIT_OK

    if args.command == "export":
        graph = _load_graph(args.graph)
        with open(args.out, "w", encoding="utf-8") as fh:
            count = graph.export_jsonl(fh)
        print(f"wrote {count} lines to {args.out}", file=sys.stderr)
        return EXIT_OK

    if args.command == "ingest":
        if not (args.shipments or args.forecasts or args.relevance):
            print("error: nothing to ingest (pass at least one file)", file=sys.stderr)
            return EXIT_USAGE
        graph = _load_graph(args.graph)
        total_nodes = total_edges = 0
        if args.shipments:
            with open(args.shipments, encoding="utf-8") as fh:
                records = ingest.parse_shipments_csv(fh)
            nodes, edges = ingest.ingest_shipments(graph, schema, records)
            total_nodes += nodes
            total_edges += edges
        if args.forecasts:
            with open(args.forecasts, encoding="utf-8") as fh:
                records = ingest.parse_forecasts_json(fh)
            nodes, edges = ingest.ingest_forecasts(graph, schema, records)
            total_nodes += nodes
            total_edges += edges
        if args.relevance:
            with open(args.relevance, encoding="utf-8") as fh:
                records = ingest.parse_relevance_jsonl(fh)
            nodes, edges = ingest.ingest_relevance(graph, schema, records)
            total_nodes += nodes
            total_edges += edges
        _save_graph(graph, args.graph)
        _emit({"nodes_added": total_nodes, "edges_added": total_edges})
        return EXIT_OK

    if args.command == "explain":
        graph = _load_graph(args.graph)
        created = 0
        for forecast in list(graph.nodes_of_kind("Forecast")):
            if not graph.out_edges(forecast.id, "EXPLAINED_BY"):
                explain.generate_explanation(graph, schema, forecast.id, args.k)
                created += 1
        _save_graph(graph, args.graph)
        _emit({"created": created})
        return EXIT_OK

    if args.command == "options":
        rules = _load_rules_arg(args.rules)
        graph = _load_graph(args.graph)
        created = 0
        for forecast in list(graph.nodes_of_kind("Forecast")):
            if not graph.out_edges(forecast.id, "SUGGESTS"):
                created += len(decide.generate_options(graph, schema, forecast.id, rules))
        _save_graph(graph, args.graph)
        _emit({"created": created})
        return EXIT_OK

    if args.command == "synth-feedback":
        config = feedback.SynthConfig(
            seed=args.seed,
            coverage={
                "Forecast": args.coverage_forecast,
                "DecisionOption": args.coverage_option,
                "FeatureRelevance": args.coverage_relevance,
            },
            annotator=args.annotator,
        )
        graph = _load_graph(args.graph)
        created = feedback.synthesize_feedback(graph, schema, config)
        _save_graph(graph, args.graph)
        _emit({"created": created})
        return EXIT_OK

    if args.command == "serve":
        from .service import create_app, run_server

        rules = _load_rules_arg(args.rules)
        graph = _load_graph(args.graph)
        app = create_app(graph, schema, rules, default_k=args.k)
        print(f"serving on 127.0.0.1:{args.port}", file=sys.stderr)
        run_server(app, args.port)
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command}")


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
