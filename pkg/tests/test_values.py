import datetime
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from forecastkg.errors import InvalidArgumentError
from forecastkg.values import (
    canonical_decimal,
    parse_iso_date,
    props_to_json,
    signed_fixed3,
    type_name_of,
    value_from_json,
    value_to_json,
)


@pytest.mark.parametrize(
    "value,expected",
    [
        (15.0, "15"),
        (15.5, "15.5"),
        (0.5, "0.5"),
        (-0.7, "-0.7"),
        (0.0, "0"),
        (-0.0, "0"),
        (1.0714285714285714, "1.0714285714285714"),
        (1e20, "100000000000000000000"),
        (1e-07, "0.0000001"),
        (-2.5e-05, "-0.000025"),
        (123.4500, "123.45"),
    ],
)
def test_canonical_decimal(value, expected):
    assert canonical_decimal(value) == expected


def test_canonical_decimal_rejects_non_finite():
    for bad in (float("nan"), float("inf"), float("-inf")):
        with pytest.raises(InvalidArgumentError):
            canonical_decimal(bad)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_canonical_decimal_reparses_to_same_value(x):
    text = canonical_decimal(x)
    assert "e" not in text and "E" not in text
    assert not text.endswith(".")
    reparsed = json.loads(text)
    assert float(reparsed) == x or (x == 0.0 and reparsed == 0)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_canonical_decimal_is_serialization_stable(x):
    """A parse/serialize cycle must reproduce the same bytes."""
    text = canonical_decimal(x)
    reparsed = json.loads(text)
    again = str(reparsed) if isinstance(reparsed, int) else canonical_decimal(reparsed)
    assert again == text


def test_type_names():
    assert type_name_of("x") == "text"
    assert type_name_of(1.5) == "decimal"
    assert type_name_of(3) == "integer"
    assert type_name_of(True) == "boolean"
    assert type_name_of(datetime.date(2020, 1, 2)) == "date"


def test_value_json_roundtrip():
    values = ["hi", 2.5, 7, False, datetime.date(2021, 12, 31)]
    for value in values:
        encoded = value_to_json(value)
        assert value_from_json(json.loads(encoded)) == value


def test_date_detection_is_strict():
    assert parse_iso_date("2020-01-02") == datetime.date(2020, 1, 2)
    assert parse_iso_date("2020-13-01") is None
    assert parse_iso_date("2020-1-2") is None
    assert parse_iso_date("20200102") is None
    assert value_from_json("2020-02-30") == "2020-02-30"  # not a real date


def test_props_json_sorts_keys():
    props = {"b": 1, "a": "x", "c": True}
    assert props_to_json(props) == '{"a":"x","b":1,"c":true}'


@pytest.mark.parametrize(
    "weight,expected",
    [
        (-0.7, "-0.700"),
        (0.5, "+0.500"),
        (0.0, "+0.000"),
        (0.0005, "+0.001"),
        (-0.0005, "-0.001"),
        (1.23456, "+1.235"),
    ],
)
def test_signed_fixed3(weight, expected):
    assert signed_fixed3(weight) == expected
