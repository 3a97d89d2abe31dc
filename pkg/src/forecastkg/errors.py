"""Exception hierarchy shared by every layer.

The service and CLI map these onto HTTP status codes and process exit
codes respectively, so new error conditions should reuse one of the
classes below rather than raising bare ValueErrors.
"""

from __future__ import annotations


class ForecastKGError(Exception):
    """Base class for all errors raised by this package."""


class UnknownIdError(ForecastKGError):
    """A node/edge id (or an external id such as a forecast_id) does not resolve."""

    def __init__(self, message: str, missing_id: str | None = None):
        super().__init__(message)
        self.missing_id = missing_id


class ParseError(ForecastKGError):
    """Malformed external input (CSV row, JSON document, JSONL line).

    ``location`` is human-readable: a row number, line number or element
    index, counted from 1 where the input has a header line.
    """

    def __init__(self, message: str, location: str | None = None):
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location


class SchemaViolationError(ForecastKGError):
    """A node or edge failed schema validation; carries the violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        detail = "; ".join(str(v) for v in self.violations)
        super().__init__(f"schema violation: {detail}" if detail else "schema violation")


class ConflictError(ForecastKGError):
    """The operation was already performed (explanation / options exist)."""


class InvalidArgumentError(ForecastKGError):
    """An argument is outside its documented domain (rating, k, fraction, ...)."""
