import json
import shutil
import subprocess
import sys

import pytest

from forecastkg import bundled_data
from forecastkg.cli import run
from forecastkg.graph import Graph
from forecastkg.schema import builtin_schema, load_schema

import synthdata


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _write_inputs(path):
    (path / "shipments.csv").write_text(synthdata.shipments_csv())
    (path / "forecasts.json").write_text(synthdata.forecasts_json())
    (path / "relevance.jsonl").write_text(synthdata.relevance_jsonl())


def test_metrics_on_bundled_path3_fixture(workdir, capsys):
    (workdir / "path3.jsonl").write_text(bundled_data("path3.jsonl"))
    assert run(["--graph", "path3.jsonl", "metrics"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["tpl"] == 8
    assert doc["mpl"] == 2


def test_metrics_sampled_flag(workdir, capsys):
    (workdir / "path3.jsonl").write_text(bundled_data("path3.jsonl"))
    assert run(["--graph", "path3.jsonl", "metrics", "--sample", "1.0", "--seed", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["sampled"] is True
    assert doc["tpl"] == 8


def test_ingest_bad_csv_row_exits_2(workdir, capsys):
    (workdir / "bad.csv").write_text(
        "date,material_id,client_id,quantity\n2020-01-02,M1,C1,-3\n"
    )
    code = run(["--graph", "g.jsonl", "ingest", "--shipments", "bad.csv"])
    assert code == 2
    assert "row 2" in capsys.readouterr().err


def test_full_pipeline_via_cli(workdir, capsys):
    _write_inputs(workdir)
    assert run([
        "--graph", "g.jsonl", "ingest",
        "--shipments", "shipments.csv",
        "--forecasts", "forecasts.json",
        "--relevance", "relevance.jsonl",
    ]) == 0
    counts = json.loads(capsys.readouterr().out)
    assert counts["nodes_added"] == 185 + 2 + 6 + 5 + 30
    assert run(["--graph", "g.jsonl", "explain", "--k", "3"]) == 0
    assert json.loads(capsys.readouterr().out) == {"created": 6}
    assert run(["--graph", "g.jsonl", "options"]) == 0
    created = json.loads(capsys.readouterr().out)["created"]
    assert created >= 6
    assert run(["--graph", "g.jsonl", "export", "--out", "out.jsonl"]) == 0
    with open("out.jsonl") as fh:
        restored = Graph.import_jsonl(fh)
    assert restored.node_count == 185 + 43 + 6 + created


def test_synth_feedback_deterministic(workdir):
    _write_inputs(workdir)
    run([
        "--graph", "base.jsonl", "ingest",
        "--shipments", "shipments.csv",
        "--forecasts", "forecasts.json",
        "--relevance", "relevance.jsonl",
    ])
    run(["--graph", "base.jsonl", "explain"])
    run(["--graph", "base.jsonl", "options"])
    base = (workdir / "base.jsonl").read_bytes()

    results = []
    for name in ("a.jsonl", "b.jsonl"):
        (workdir / name).write_bytes(base)
        assert run([
            "--graph", name, "synth-feedback", "--seed", "7",
            "--coverage-forecast", "1.0",
            "--coverage-option", "0.5",
            "--coverage-relevance", "0.25",
        ]) == 0
        results.append((workdir / name).read_bytes())
    assert results[0] == results[1]
    assert results[0] != base


def test_schema_command_prints_descriptor(workdir, capsys):
    assert run(["schema"]) == 0
    descriptor = capsys.readouterr().out
    assert load_schema(descriptor) == builtin_schema()


def test_schema_file_flag(workdir, capsys):
    (workdir / "tiny.json").write_text(
        '{"node_kinds":[{"name":"A","required_props":{}}],"edge_kinds":[]}'
    )
    assert run(["--schema", "tiny.json", "schema"]) == 0
    descriptor = capsys.readouterr().out
    assert [k.name for k in load_schema(descriptor).node_kinds] == ["A"]


def test_usage_error_exits_1(workdir, capsys):
    assert run(["frobnicate"]) == 1
    assert run(["metrics", "--sample", "not-a-number"]) == 1
    assert run(["--graph", "g.jsonl", "ingest"]) == 1


def test_unknown_forecast_id_exits_4(workdir, capsys):
    (workdir / "relevance.jsonl").write_text(
        '{"forecast_id":"ghost","feature":"price","weight":0.5}\n'
    )
    code = run(["--graph", "g.jsonl", "ingest", "--relevance", "relevance.jsonl"])
    assert code == 4
    assert "ghost" in capsys.readouterr().err


def test_schema_violation_exits_3(workdir, capsys):
    (workdir / "empty_schema.json").write_text("{}")
    (workdir / "shipments.csv").write_text(
        "date,material_id,client_id,quantity\n2020-01-02,M1,C1,10\n"
    )
    code = run([
        "--graph", "g.jsonl", "--schema", "empty_schema.json",
        "ingest", "--shipments", "shipments.csv",
    ])
    assert code == 3


def test_missing_input_file_exits_2(workdir):
    assert run(["--graph", "g.jsonl", "ingest", "--shipments", "nope.csv"]) == 2


def test_console_entry_point(tmp_path):
    (tmp_path / "path3.jsonl").write_text(bundled_data("path3.jsonl"))
    result = subprocess.run(
        [sys.executable, "-m", "forecastkg.cli", "--graph", "path3.jsonl", "metrics"],
        cwd=tmp_path,
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert result.returncode == 0
    assert json.loads(result.stdout)["tpl"] == 8
    binary = shutil.which("forecastkg")
    if binary:
        result = subprocess.run(
            [binary, "--graph", str(tmp_path / "path3.jsonl"), "metrics"],
            capture_output=True,
            text=True,
            timeout=60,
        )
        assert result.returncode == 0
        assert json.loads(result.stdout)["tpl"] == 8
