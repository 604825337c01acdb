"""Coalition value of pooled demand data and the valuations built on it."""

from demandvalue.valuation.game import ForecastValueGame, coalition_value
from demandvalue.valuation.report import (
    SourceValue,
    ValueReport,
    build_value_report,
    shapley_volume_r2,
)
from demandvalue.valuation.shapley import (
    coalition_values,
    exact_shapley,
    leave_one_out,
    shapley_weights,
    volume_shares,
)

__all__ = [
    "ForecastValueGame",
    "SourceValue",
    "ValueReport",
    "build_value_report",
    "coalition_value",
    "coalition_values",
    "exact_shapley",
    "leave_one_out",
    "shapley_volume_r2",
    "shapley_weights",
    "volume_shares",
]
