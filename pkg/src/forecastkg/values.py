"""Property values and their canonical text forms.

A property value is one of: text (str), decimal (float), integer (int),
boolean (bool), or a calendar date (datetime.date). The canonical JSON
forms here are shared by the snapshot format, the explanation renderer
and the HTTP layer, so that the same graph always serializes to the same
bytes.
"""

from __future__ import annotations

import datetime
import json
import math
import re
from decimal import ROUND_HALF_UP, Decimal

from .errors import InvalidArgumentError

PropertyValue = str | float | int | bool | datetime.date

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")

#: schema type-name -> runtime check. bool is checked before int because
#: bool is an int subclass; decimal means float only (ints stay integers
#: through a snapshot roundtrip, floats with integral values do not).
TYPE_NAMES = ("text", "decimal", "integer", "boolean", "date")


def type_name_of(value: PropertyValue) -> str:
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, float):
        return "decimal"
    if isinstance(value, datetime.date):
        return "date"
    if isinstance(value, str):
        return "text"
    raise InvalidArgumentError(f"unsupported property value type: {type(value).__name__}")


def check_value(value: PropertyValue) -> None:
    """Reject values outside the property-value domain (non-finite numbers, datetimes)."""
    if isinstance(value, datetime.datetime):
        raise InvalidArgumentError("datetime values are not allowed; use a calendar date")
    kind = type_name_of(value)
    if kind == "decimal" and not math.isfinite(value):
        raise InvalidArgumentError(f"non-finite decimal value: {value!r}")


def canonical_decimal(x: float) -> str:
    """Shortest decimal text for a float: no exponent, no trailing zeros.

    Integral values lose the fraction part entirely ("15", not "15.0"),
    and -0.0 collapses to "0" so that a serialize/parse/serialize cycle
    is byte-stable even when the parse narrows the value to an int.
    """
    if not math.isfinite(x):
        raise InvalidArgumentError(f"non-finite decimal value: {x!r}")
    if x == 0.0:
        return "0"
    s = repr(float(x))
    if "e" in s or "E" in s:
        s = format(Decimal(s), "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s


def value_to_json(value: PropertyValue) -> str:
    """Canonical JSON fragment for one property value."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return canonical_decimal(value)
    if isinstance(value, datetime.date):
        return f'"{value.isoformat()}"'
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    raise InvalidArgumentError(f"unsupported property value type: {type(value).__name__}")


def value_from_json(raw) -> PropertyValue:
    """Inverse of value_to_json over decoded JSON scalars.

    Strings shaped like a valid ISO date come back as dates; the snapshot
    format does not distinguish the two, and re-serialization yields the
    same bytes either way.
    """
    if isinstance(raw, str):
        date = parse_iso_date(raw)
        return date if date is not None else raw
    if isinstance(raw, (bool, int, float)):
        return raw
    raise InvalidArgumentError(f"unsupported JSON property value: {raw!r}")


def parse_iso_date(text: str) -> datetime.date | None:
    """Strict YYYY-MM-DD parse; None when the text is not a valid date."""
    if not _DATE_RE.match(text):
        return None
    try:
        return datetime.date.fromisoformat(text)
    except ValueError:
        return None


def props_to_json(props: dict[str, PropertyValue]) -> str:
    """Property map as a canonical JSON object: keys ascending, values canonical."""
    parts = (
        f"{json.dumps(key, ensure_ascii=False)}:{value_to_json(props[key])}"
        for key in sorted(props)
    )
    return "{" + ",".join(parts) + "}"


def signed_fixed3(weight: float) -> str:
    """Sign-prefixed weight with exactly three decimals, half away from zero."""
    magnitude = Decimal(repr(abs(float(weight)))).quantize(
        Decimal("0.001"), rounding=ROUND_HALF_UP
    )
    sign = "-" if weight < 0 else "+"
    return f"{sign}{magnitude}"
