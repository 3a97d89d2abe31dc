import datetime

import pytest

from forecastkg import explain, ingest
from forecastkg.errors import ConflictError, InvalidArgumentError, UnknownIdError
from forecastkg.explain import RankedFeature, generate_explanation, rank_features, render_text
from forecastkg.graph import Graph


def test_rank_features_by_magnitude():
    ranked = rank_features([("price", 0.5), ("promo", -0.7), ("dow", 0.1)])
    assert [(r.feature, r.rank) for r in ranked] == [("promo", 1), ("price", 2), ("dow", 3)]


def test_rank_features_empty():
    assert rank_features([]) == []


def test_rank_features_tie_breaks_by_name():
    ranked = rank_features([("b", -0.3), ("a", 0.3)])
    assert [(r.feature, r.rank) for r in ranked] == [("a", 1), ("b", 2)]


def test_rank_features_duplicate_name():
    with pytest.raises(InvalidArgumentError):
        rank_features([("a", 0.1), ("a", 0.2)])


def test_render_text_template():
    top = [RankedFeature("promo", -0.7, 1), RankedFeature("price", 0.5, 2)]
    text = render_text(15.0, "M1", "C1", datetime.date(2020, 2, 1), top)
    assert text == (
        "Forecast for material M1, client C1 on 2020-02-01: 15 units. "
        "Top influences: promo (-0.700, supporting lower demand); "
        "price (+0.500, supporting higher demand)."
    )


def test_render_text_no_features():
    text = render_text(3.5, "M2", "C9", datetime.date(2021, 1, 1), [])
    assert text.endswith("Top influences: none.")
    assert "3.5 units" in text


def test_render_text_zero_weight_is_positive_branch():
    text = render_text(1.0, "M", "C", datetime.date(2020, 1, 1), [RankedFeature("x", 0.0, 1)])
    assert "x (+0.000, supporting higher demand)" in text


def test_render_text_is_pure():
    top = [RankedFeature("a", 0.25, 1)]
    args = (7.25, "M1", "C1", datetime.date(2020, 3, 4), top)
    assert render_text(*args) == render_text(*args)


def _one_forecast_graph(schema, weights):
    g = Graph()
    doc = (
        '[{"forecast_id":"f1","model_id":"m","use_case":"u","material_id":"M1",'
        '"client_id":"C1","target_date":"2020-02-01","created_at":"2020-01-31","quantity":15}]'
    )
    ingest.ingest_forecasts(g, schema, ingest.parse_forecasts_json(doc))
    lines = "\n".join(
        f'{{"forecast_id":"f1","feature":"{name}","weight":{w}}}' for name, w in weights
    )
    if weights:
        ingest.ingest_relevance(g, schema, ingest.parse_relevance_jsonl(lines))
    forecast = next(g.nodes_of_kind("Forecast"))
    return g, forecast.id


def test_generate_explanation_top_k_edges(schema):
    g, forecast_id = _one_forecast_graph(
        schema, [("price", 0.5), ("promo", -0.7), ("dow", 0.1)]
    )
    explanation_id = generate_explanation(g, schema, forecast_id, 2)
    based_on = g.out_edges(explanation_id, "BASED_ON")
    assert len(based_on) == 2
    ranks = sorted(g.node(e.dst).props["rank"] for e in based_on)
    assert ranks == [1, 2]


def test_generate_explanation_k_larger_than_n(schema):
    g, forecast_id = _one_forecast_graph(schema, [("price", 0.5)])
    explanation_id = generate_explanation(g, schema, forecast_id, 5)
    assert len(g.out_edges(explanation_id, "BASED_ON")) == 1


def test_generate_explanation_weights_non_increasing(schema):
    g, forecast_id = _one_forecast_graph(
        schema, [("a", 0.2), ("b", -0.9), ("c", 0.4), ("d", 0.01)]
    )
    explanation_id = generate_explanation(g, schema, forecast_id, 4)
    targets = [g.node(e.dst) for e in g.out_edges(explanation_id, "BASED_ON")]
    targets.sort(key=lambda n: n.props["rank"])
    magnitudes = [abs(n.props["weight"]) for n in targets]
    assert magnitudes == sorted(magnitudes, reverse=True)


def test_generate_explanation_rejects_second_call(schema):
    g, forecast_id = _one_forecast_graph(schema, [("a", 0.1)])
    generate_explanation(g, schema, forecast_id, 3)
    with pytest.raises(ConflictError):
        generate_explanation(g, schema, forecast_id, 3)


def test_generate_explanation_rejects_bad_k(schema):
    g, forecast_id = _one_forecast_graph(schema, [("a", 0.1)])
    with pytest.raises(InvalidArgumentError):
        generate_explanation(g, schema, forecast_id, 0)


def test_generate_explanation_unknown_forecast(schema):
    g = Graph()
    with pytest.raises(UnknownIdError):
        generate_explanation(g, schema, "n42", 3)


def test_explanation_with_no_relevances(schema):
    g, forecast_id = _one_forecast_graph(schema, [])
    explanation_id = generate_explanation(g, schema, forecast_id, 3)
    assert g.out_edges(explanation_id, "BASED_ON") == []
    assert g.node(explanation_id).props["text"].endswith("none.")
