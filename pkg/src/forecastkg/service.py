"""JSON-over-HTTP API exposing the graph, pipeline, and feedback operations.

This layer holds no business logic: every handler parses the request,
takes the appropriate side of the reader-writer lock, and calls the
module operation the endpoint documents. Error bodies always carry
{"status", "code", "message"}.
"""

from __future__ import annotations

import datetime
import json
import threading
from contextlib import contextmanager

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from . import decide, explain, feedback, ingest, metrics
from .errors import (
    ConflictError,
    ForecastKGError,
    InvalidArgumentError,
    ParseError,
    SchemaViolationError,
    UnknownIdError,
)
from .graph import Graph
from .schema import SchemaSpec, dump_schema
from .values import parse_iso_date


class RWLock:
    """Writer-preference reader-writer lock for the single-writer contract."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._readers_done = threading.Condition(self._lock)
        self._readers = 0
        self._writer = False

    @contextmanager
    def read(self):
        with self._lock:
            while self._writer:
                self._readers_done.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._lock:
                self._readers -= 1
                if self._readers == 0:
                    self._readers_done.notify_all()

    @contextmanager
    def write(self):
        with self._lock:
            while self._writer or self._readers:
                self._readers_done.wait()
            self._writer = True
        try:
            yield
        finally:
            with self._lock:
                self._writer = False
                self._readers_done.notify_all()


_ERROR_CODES = [
    (ParseError, 400, "parse_error"),
    (SchemaViolationError, 422, "schema_violation"),
    (UnknownIdError, 404, "unknown_id"),
    (ConflictError, 409, "conflict"),
    (InvalidArgumentError, 422, "invalid_argument"),
]


def _error_response(exc: ForecastKGError) -> JSONResponse:
    for cls, status, code in _ERROR_CODES:
        if isinstance(exc, cls):
            return JSONResponse(
                status_code=status,
                content={"status": status, "code": code, "message": str(exc)},
            )
    return JSONResponse(
        status_code=500,
        content={"status": 500, "code": "invalid_argument", "message": str(exc)},
    )


def _bad_request(message: str, code: str = "invalid_argument", status: int = 422) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"status": status, "code": code, "message": message}
    )


def create_app(
    graph: Graph,
    schema: SchemaSpec,
    rules: decide.RulesConfig | None = None,
    default_k: int = 3,
) -> FastAPI:
    app = FastAPI(title="forecastkg", docs_url=None, redoc_url=None)
    lock = RWLock()
    rules = rules or decide.RulesConfig()

    @app.exception_handler(ForecastKGError)
    async def handle_domain_error(request: Request, exc: ForecastKGError):
        return _error_response(exc)

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return _bad_request(str(exc.errors()))

    # -- ingestion ----------------------------------------------------

    @app.post("/ingest/shipments")
    async def ingest_shipments_endpoint(request: Request):
        body = (await request.body()).decode("utf-8")
        records = ingest.parse_shipments_csv(body)
        with lock.write():
            nodes, edges = ingest.ingest_shipments(graph, schema, records)
        return {"nodes_added": nodes, "edges_added": edges}

    @app.post("/ingest/forecasts")
    async def ingest_forecasts_endpoint(request: Request):
        body = (await request.body()).decode("utf-8")
        records = ingest.parse_forecasts_json(body)
        with lock.write():
            nodes, edges = ingest.ingest_forecasts(graph, schema, records)
        return {"nodes_added": nodes, "edges_added": edges}

    @app.post("/ingest/relevance")
    async def ingest_relevance_endpoint(request: Request):
        body = (await request.body()).decode("utf-8")
        records = ingest.parse_relevance_jsonl(body)
        with lock.write():
            nodes, edges = ingest.ingest_relevance(graph, schema, records)
        return {"nodes_added": nodes, "edges_added": edges}

    # -- pipeline -----------------------------------------------------

    @app.post("/pipeline/explanations")
    async def pipeline_explanations(request: Request):
        doc = await _json_body(request)
        k = doc.get("k", default_k)
        if not isinstance(k, int) or isinstance(k, bool):
            raise InvalidArgumentError(f"k must be an integer, got {k!r}")
        with lock.write():
            created = 0
            for forecast in list(graph.nodes_of_kind("Forecast")):
                if not graph.out_edges(forecast.id, "EXPLAINED_BY"):
                    explain.generate_explanation(graph, schema, forecast.id, k)
                    created += 1
            return {"created": created}

    @app.post("/pipeline/options")
    async def pipeline_options(request: Request):
        doc = await _json_body(request)
        config = rules
        if "config" in doc and doc["config"] is not None:
            if not isinstance(doc["config"], dict):
                raise InvalidArgumentError("config must be an object")
            config = decide.load_rules(json.dumps(doc["config"]))
        with lock.write():
            created = 0
            for forecast in list(graph.nodes_of_kind("Forecast")):
                if not graph.out_edges(forecast.id, "SUGGESTS"):
                    created += len(decide.generate_options(graph, schema, forecast.id, config))
            return {"created": created}

    # -- feedback -----------------------------------------------------

    @app.post("/feedback", status_code=201)
    async def post_feedback(request: Request):
        doc = await _json_body(request)
        user_name = doc.get("user")
        if not isinstance(user_name, str) or not user_name:
            raise InvalidArgumentError("user must be a non-empty string")
        rating = doc.get("rating")
        comment = doc.get("comment", "")
        if not isinstance(comment, str):
            raise InvalidArgumentError("comment must be a string")
        target_id = doc.get("target_id")
        if not isinstance(target_id, str):
            raise InvalidArgumentError("target_id must be a string")
        created_at = _optional_date(doc.get("created_at"))
        with lock.write():
            user_id = feedback.ensure_user(graph, schema, user_name)
            feedback_id = feedback.record_feedback(
                graph, schema, user_id, target_id, rating, comment, created_at
            )
        return {"feedback_id": feedback_id}

    @app.post("/actions", status_code=201)
    async def post_action(request: Request):
        doc = await _json_body(request)
        user_name = doc.get("user")
        if not isinstance(user_name, str) or not user_name:
            raise InvalidArgumentError("user must be a non-empty string")
        option_id = doc.get("option_id")
        if not isinstance(option_id, str):
            raise InvalidArgumentError("option_id must be a string")
        kind = doc.get("kind")
        created_at = _optional_date(doc.get("created_at"))
        with lock.write():
            user_id = feedback.ensure_user(graph, schema, user_name)
            action_id = feedback.record_action(
                graph, schema, user_id, option_id, kind, created_at
            )
        return {"action_id": action_id}

    # -- queries --------------------------------------------------------

    @app.get("/forecasts")
    async def list_forecasts(
        material: str | None = None,
        client: str | None = None,
        frm: str | None = Query(default=None, alias="from"),
        to: str | None = None,
        limit: int = 100,
        offset: int = 0,
    ):
        date_from = _optional_date(frm)
        date_to = _optional_date(to)
        with lock.read():
            rows = []
            for node in graph.nodes_of_kind("Forecast"):
                row = _forecast_row(graph, node)
                if material is not None and row["material"] != material:
                    continue
                if client is not None and row["client"] != client:
                    continue
                target = node.props["target_date"]
                if date_from is not None and target < date_from:
                    continue
                if date_to is not None and target > date_to:
                    continue
                rows.append(row)
            return rows[offset : offset + limit]

    @app.get("/forecasts/{node_id}")
    async def forecast_detail(node_id: str):
        with lock.read():
            node = graph.node(node_id)
            if node.kind != "Forecast":
                raise UnknownIdError(f"{node_id} is not a Forecast", node_id)
            detail = _forecast_row(graph, node)
            detail["created_at"] = node.props["created_at"].isoformat()
            explanation_id = explain.explanation_of(graph, node_id)
            if explanation_id is None:
                detail["explanation"] = None
            else:
                explanation = graph.node(explanation_id)
                features = []
                for edge in graph.out_edges(explanation_id, "BASED_ON"):
                    relevance_id, ranked = _ranked_relevance(graph, edge.dst)
                    features.append(
                        {
                            "relevance_id": relevance_id,
                            "feature": ranked.feature,
                            "weight": ranked.weight,
                            "rank": ranked.rank,
                        }
                    )
                features.sort(key=lambda f: f["rank"])
                detail["explanation"] = {
                    "node_id": explanation_id,
                    "k": explanation.props["k"],
                    "text": explanation.props["text"],
                    "features": features,
                }
            options = []
            for edge in graph.out_edges(node_id, "SUGGESTS"):
                option = graph.node(edge.dst)
                options.append(
                    {
                        "node_id": option.id,
                        "action": option.props["action"],
                        "rank": option.props["rank"],
                        "deviation": option.props["deviation"],
                        "feedback": _summary_dict(graph, option.id),
                    }
                )
            options.sort(key=lambda o: o["rank"])
            detail["options"] = options
            detail["feedback"] = _summary_dict(graph, node_id)
            return detail

    # -- metrics, export, schema -----------------------------------------

    @app.get("/metrics")
    async def get_metrics(sample: float | None = None, seed: int = 0):
        with lock.read():
            if sample is None:
                return metrics.exact_metrics(graph).to_dict()
            return metrics.sampled_metrics(graph, sample, seed).to_dict()

    @app.get("/graph/export")
    async def export_graph():
        with lock.read():
            return PlainTextResponse(
                graph.export_jsonl_text(), media_type="application/jsonl"
            )

    @app.get("/schema")
    async def get_schema():
        return Response(dump_schema(schema), media_type="application/json")

    return app


def run_server(app: FastAPI, port: int) -> None:
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")


async def _json_body(request: Request) -> dict:
    body = await request.body()
    if not body.strip():
        return {}
    try:
        doc = json.loads(body)
    except ValueError as exc:
        raise ParseError(f"invalid JSON body: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("expected a JSON object body")
    return doc


def _optional_date(raw) -> datetime.date | None:
    if raw is None:
        return None
    if isinstance(raw, str):
        date = parse_iso_date(raw)
        if date is not None:
            return date
    raise InvalidArgumentError(f"expected a YYYY-MM-DD date, got {raw!r}")


def _forecast_row(graph: Graph, node) -> dict:
    material_edges = graph.out_edges(node.id, "FOR_MATERIAL")
    client_edges = graph.out_edges(node.id, "FOR_CLIENT")
    return {
        "forecast_id": node.props.get("source_id", ""),
        "node_id": node.id,
        "target_date": node.props["target_date"].isoformat(),
        "quantity": node.props["quantity"],
        "material": graph.node(material_edges[0].dst).props["code"] if material_edges else None,
        "client": graph.node(client_edges[0].dst).props["code"] if client_edges else None,
    }


def _ranked_relevance(graph: Graph, relevance_id: str):
    node = graph.node(relevance_id)
    feature_edges = graph.out_edges(relevance_id, "OF_FEATURE")
    name = graph.node(feature_edges[0].dst).props["name"] if feature_edges else ""
    return relevance_id, explain.RankedFeature(name, node.props["weight"], node.props["rank"])


def _summary_dict(graph: Graph, target_id: str) -> dict:
    summary = feedback.summarize_feedback(graph, target_id)
    return {
        "count": summary.count,
        "mean_rating": summary.mean_rating,
        "histogram": list(summary.histogram),
    }
