"""Acceptance suite: one test per release criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS/FAIL
line per criterion.
"""

import datetime
import io
import json
import random
import time
from contextlib import contextmanager
from itertools import product

import pytest
from fastapi.testclient import TestClient

from forecastkg import decide, explain, ingest
from forecastkg.cli import run as cli_run
from forecastkg.graph import Graph
from forecastkg.metrics import exact_metrics, sampled_metrics
from forecastkg.rng import SplitMix64
from forecastkg.schema import builtin_schema, validate_edge
from forecastkg.service import create_app

import synthdata
from test_metrics import floyd_warshall_metrics
from test_schema import BUILTIN_ENDPOINTS


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"FAIL  {name}")
        raise
    print(f"PASS  {name}")


def _oracle_graph(seed: int) -> Graph:
    rng = random.Random(seed)
    n = rng.randint(2, 100)
    p = [0.02, 0.1, 0.5][seed % 3]
    g = Graph()
    ids = [g.add_node("V", {"i": i}) for i in range(n)]
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p:
                g.add_edge("E", ids[u], ids[v])
    return g


def test_metrics_oracle_on_50_random_graphs():
    with criterion("metrics oracle: exact_metrics == Floyd-Warshall on 50 graphs, < 5 s"):
        started = time.perf_counter()
        for seed in range(50):
            g = _oracle_graph(seed)
            m = exact_metrics(g)
            tpl, mpl, apl, reachable, unreachable = floyd_warshall_metrics(g)
            assert m.tpl == tpl
            assert m.mpl == mpl
            assert m.reachable_pair_count == reachable
            assert m.unreachable_pair_count == unreachable
            if reachable:
                assert abs(m.apl - apl) <= 1e-9 * abs(apl)
            else:
                assert m.apl == 0.0
        elapsed = time.perf_counter() - started
        assert elapsed < 5.0, f"oracle sweep took {elapsed:.2f}s"


def test_fixture_exactness():
    with criterion("fixture exactness: path-3, triangle, two components"):
        path3 = Graph()
        a, b, c = (path3.add_node("V") for _ in range(3))
        path3.add_edge("E", a, b)
        path3.add_edge("E", b, c)
        m = exact_metrics(path3)
        assert (m.tpl, m.mpl) == (8, 2)
        assert m.apl == pytest.approx(8 / 6, rel=1e-12)

        triangle = Graph()
        a, b, c = (triangle.add_node("V") for _ in range(3))
        triangle.add_edge("E", a, b)
        triangle.add_edge("E", b, c)
        triangle.add_edge("E", c, a)
        m = exact_metrics(triangle)
        assert (m.tpl, m.mpl, m.apl) == (6, 1, 1.0)

        split = Graph()
        a, b, c = (split.add_node("V") for _ in range(3))
        split.add_edge("E", a, b)
        m = exact_metrics(split)
        assert (m.tpl, m.mpl, m.apl) == (2, 1, 1.0)
        assert m.unreachable_pair_count == 4


def test_sampling_consistency_at_full_fraction():
    with criterion("sampling consistency: fraction 1 reproduces exact apl/mpl on 50 graphs"):
        for seed in range(50):
            g = _oracle_graph(seed)
            exact = exact_metrics(g)
            sampled = sampled_metrics(g, 1.0, seed * 31 + 1)
            assert sampled.apl == exact.apl
            assert sampled.mpl == exact.mpl
            connected = exact.unreachable_pair_count == 0
            if connected:
                assert sampled.tpl == exact.tpl


def test_pipeline_count_formulas():
    with criterion("pipeline count formulas on the synthetic dataset, < 1 s"):
        started = time.perf_counter()
        schema = builtin_schema()
        g = Graph()

        shipments = ingest.parse_shipments_csv(synthdata.shipments_csv())
        nodes, edges = ingest.ingest_shipments(g, schema, shipments)
        S, M, C = 30 * 3 * 2, 3, 2
        assert len(shipments) == S
        assert nodes == S + M + C
        assert edges == 2 * S

        forecasts = ingest.parse_forecasts_json(synthdata.forecasts_json())
        nodes, edges = ingest.ingest_forecasts(g, schema, forecasts)
        F = 6
        assert nodes == 2 + F  # 1 model + 1 use case + forecasts
        assert edges == 1 + 3 * F

        relevances = ingest.parse_relevance_jsonl(synthdata.relevance_jsonl())
        nodes, edges = ingest.ingest_relevance(g, schema, relevances)
        K, R = 5, 30
        assert nodes == K + R
        assert edges == 2 * R

        for forecast in list(g.nodes_of_kind("Forecast")):
            explain.generate_explanation(g, schema, forecast.id, 3)
        explanations = list(g.nodes_of_kind("ForecastExplanation"))
        assert len(explanations) == 6
        for explanation in explanations:
            based_on = g.out_edges(explanation.id, "BASED_ON")
            assert len(based_on) == 3
            targets = sorted(
                (g.node(e.dst) for e in based_on), key=lambda n: n.props["rank"]
            )
            magnitudes = [abs(t.props["weight"]) for t in targets]
            assert magnitudes == sorted(magnitudes, reverse=True)

        rules = decide.RulesConfig()
        for forecast in list(g.nodes_of_kind("Forecast")):
            decide.generate_options(g, schema, forecast.id, rules)
        guard_action_lists = {
            guard: list(actions) for guard, actions in rules.actions.items()
        }
        for forecast in g.nodes_of_kind("Forecast"):
            options = [g.node(e.dst) for e in g.out_edges(forecast.id, "SUGGESTS")]
            assert len(options) >= 1
            options.sort(key=lambda n: n.props["rank"])
            actions = [o.props["action"] for o in options]
            firing = [g for g, acts in guard_action_lists.items() if acts == actions]
            assert len(firing) == 1  # exactly one rule's full action list
            assert [o.props["rank"] for o in options] == list(range(1, len(options) + 1))

        elapsed = time.perf_counter() - started
        assert elapsed < 1.0, f"pipeline took {elapsed:.2f}s"


def test_schema_kind_matrix():
    with criterion("schema kind matrix: 13x13x13 accepts exactly the enumerated pairs"):
        schema = builtin_schema()
        node_kinds = [spec.name for spec in schema.node_kinds]
        edge_kinds = [spec.name for spec in schema.edge_kinds]
        assert len(node_kinds) == 13 and len(edge_kinds) == 13
        accepted = set()
        for kind, src, dst in product(edge_kinds, node_kinds, node_kinds):
            if validate_edge(schema, kind, src, dst, {}) == []:
                accepted.add((kind, src, dst))
        assert accepted == BUILTIN_ENDPOINTS


def test_synth_feedback_determinism(tmp_path):
    with criterion("determinism: synth-feedback --seed 7 twice is byte-identical"):
        assert SplitMix64(0).next_u64() == 0xE220A8397B1DCDAF

        (tmp_path / "shipments.csv").write_text(synthdata.shipments_csv())
        (tmp_path / "forecasts.json").write_text(synthdata.forecasts_json())
        (tmp_path / "relevance.jsonl").write_text(synthdata.relevance_jsonl())
        base = tmp_path / "base.jsonl"
        assert cli_run([
            "--graph", str(base), "ingest",
            "--shipments", str(tmp_path / "shipments.csv"),
            "--forecasts", str(tmp_path / "forecasts.json"),
            "--relevance", str(tmp_path / "relevance.jsonl"),
        ]) == 0
        assert cli_run(["--graph", str(base), "explain"]) == 0
        assert cli_run(["--graph", str(base), "options"]) == 0

        snapshots = []
        for name in ("run1.jsonl", "run2.jsonl"):
            target = tmp_path / name
            target.write_bytes(base.read_bytes())
            assert cli_run([
                "--graph", str(target), "synth-feedback", "--seed", "7",
                "--coverage-forecast", "0.8",
                "--coverage-option", "0.6",
                "--coverage-relevance", "0.4",
            ]) == 0
            export = tmp_path / f"export_{name}"
            assert cli_run(["--graph", str(target), "export", "--out", str(export)]) == 0
            snapshots.append(export.read_bytes())
        assert snapshots[0] == snapshots[1]
        assert snapshots[0] != base.read_bytes()


def _random_props(rng: random.Random) -> dict:
    props = {}
    for _ in range(rng.randint(0, 5)):
        key = rng.choice(["alpha", "beta", "gamma", "δelta", "e_key", "f"])
        choice = rng.randrange(5)
        if choice == 0:
            props[key] = rng.choice(["", "text", "line\nbreak", "unicode-žš", '"quoted"'])
        elif choice == 1:
            props[key] = rng.choice(
                [0.0, -0.0, 0.1, -2.5, 1e-7, 1e20, 123.456, rng.uniform(-1e6, 1e6)]
            )
        elif choice == 2:
            props[key] = rng.randint(-(10**9), 10**9)
        elif choice == 3:
            props[key] = rng.random() < 0.5
        else:
            props[key] = datetime.date(2000, 1, 1) + datetime.timedelta(
                days=rng.randint(0, 10000)
            )
    return props


def test_persistence_roundtrip_on_20_random_graphs():
    with criterion("persistence: export/import/export byte-identity on 20 graphs"):
        for seed in range(20):
            rng = random.Random(1000 + seed)
            g = Graph()
            ids = [
                g.add_node(rng.choice("ABC"), _random_props(rng))
                for _ in range(rng.randint(1, 25))
            ]
            for _ in range(rng.randint(0, 40)):
                g.add_edge(
                    rng.choice("LMN"),
                    rng.choice(ids),
                    rng.choice(ids),
                    _random_props(rng),
                )
            first = g.export_jsonl_text()
            restored = Graph.import_jsonl(io.StringIO(first))
            assert restored.export_jsonl_text() == first


def test_cli_api_equivalence(tmp_path):
    with criterion("CLI/API equivalence: byte-identical exports of the full pipeline"):
        # CLI side: snapshot-file workflow
        (tmp_path / "shipments.csv").write_text(synthdata.shipments_csv())
        (tmp_path / "forecasts.json").write_text(synthdata.forecasts_json())
        (tmp_path / "relevance.jsonl").write_text(synthdata.relevance_jsonl())
        snapshot = tmp_path / "cli.jsonl"
        assert cli_run([
            "--graph", str(snapshot), "ingest",
            "--shipments", str(tmp_path / "shipments.csv"),
            "--forecasts", str(tmp_path / "forecasts.json"),
            "--relevance", str(tmp_path / "relevance.jsonl"),
        ]) == 0
        assert cli_run(["--graph", str(snapshot), "explain", "--k", "3"]) == 0
        assert cli_run(["--graph", str(snapshot), "options"]) == 0
        cli_export = tmp_path / "cli_export.jsonl"
        assert cli_run(["--graph", str(snapshot), "export", "--out", str(cli_export)]) == 0

        # API side: same inputs through the HTTP surface
        app = create_app(Graph(), builtin_schema())
        client = TestClient(app)
        assert client.post("/ingest/shipments", content=synthdata.shipments_csv()).status_code == 200
        assert client.post("/ingest/forecasts", content=synthdata.forecasts_json()).status_code == 200
        assert client.post("/ingest/relevance", content=synthdata.relevance_jsonl()).status_code == 200
        assert client.post("/pipeline/explanations", json={"k": 3}).status_code == 200
        assert client.post("/pipeline/options", json={}).status_code == 200
        api_export = client.get("/graph/export").text

        assert api_export == cli_export.read_text()
