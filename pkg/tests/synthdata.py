"""Deterministic synthetic dataset used across the pipeline tests.

Shape: 30 days of shipments for 3 materials x 2 clients, one model and
use case, 6 forecasts (one per material/client pair), and 5 features of
relevance per forecast. Everything is a pure function of the indices, so
every run of the suite feeds the pipeline identical bytes.
"""

from __future__ import annotations

import json

MATERIALS = ["M1", "M2", "M3"]
CLIENTS = ["C1", "C2"]
FEATURES = ["dow", "month", "price", "promo", "trend"]
DAYS = 30
N_FORECASTS = len(MATERIALS) * len(CLIENTS)
N_RELEVANCE = N_FORECASTS * len(FEATURES)

TARGET_DATE = "2020-02-01"
CREATED_AT = "2020-01-31"

# multipliers over each pair's trailing baseline, chosen to hit surge,
# drop, and steady guards across the six forecasts
_FACTORS = [1.6, 0.4, 1.0, 1.3, 0.7, 2.5]


def shipment_quantity(day: int, material_index: int, client_index: int) -> int:
    return 5 + (day + 3 * material_index + 7 * client_index) % 11


def shipments_csv() -> str:
    lines = ["date,material_id,client_id,quantity"]
    for day in range(1, DAYS + 1):
        for mi, material in enumerate(MATERIALS):
            for ci, client in enumerate(CLIENTS):
                lines.append(
                    f"2020-01-{day:02d},{material},{client},"
                    f"{shipment_quantity(day, mi, ci)}"
                )
    return "\n".join(lines) + "\n"


def baseline_of(material_index: int, client_index: int, window_days: int = 28) -> float:
    """Trailing mean for TARGET_DATE, computed straight from the formula."""
    # window 2020-01-04 .. 2020-01-31 covers shipment days 4..30
    total = sum(
        shipment_quantity(day, material_index, client_index)
        for day in range(4, DAYS + 1)
    )
    return total / window_days


def forecasts_json() -> str:
    docs = []
    i = 0
    for mi, material in enumerate(MATERIALS):
        for ci, client in enumerate(CLIENTS):
            quantity = round(baseline_of(mi, ci) * _FACTORS[i], 2)
            docs.append(
                {
                    "forecast_id": f"f{i + 1}",
                    "model_id": "demand-model-1",
                    "use_case": "demand-forecasting",
                    "material_id": material,
                    "client_id": client,
                    "target_date": TARGET_DATE,
                    "created_at": CREATED_AT,
                    "quantity": quantity,
                }
            )
            i += 1
    return json.dumps(docs)


def relevance_weight(forecast_index: int, feature_index: int) -> float:
    return ((forecast_index * 31 + feature_index * 17) % 21 - 10) / 10


def relevance_jsonl() -> str:
    lines = []
    for fi in range(N_FORECASTS):
        for ki, feature in enumerate(FEATURES):
            lines.append(
                json.dumps(
                    {
                        "forecast_id": f"f{fi + 1}",
                        "feature": feature,
                        "weight": relevance_weight(fi, ki),
                    }
                )
            )
    return "\n".join(lines) + "\n"
