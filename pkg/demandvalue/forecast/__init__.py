"""Demand forecasters and the similarity metrics that score them."""

from demandvalue.forecast.forecasters import (
    FORECASTERS,
    Forecast,
    Forecaster,
    SeasonalNaiveForecaster,
    SeasonalProfileForecaster,
    get_forecaster,
)
from demandvalue.forecast.metrics import (
    METRICS,
    cosine_similarity,
    dtw_distance,
    get_metric,
    mean_normalize,
    numerical_similarity,
    relative_dtw,
)

__all__ = [
    "FORECASTERS",
    "METRICS",
    "Forecast",
    "Forecaster",
    "SeasonalNaiveForecaster",
    "SeasonalProfileForecaster",
    "cosine_similarity",
    "dtw_distance",
    "get_forecaster",
    "get_metric",
    "mean_normalize",
    "numerical_similarity",
    "relative_dtw",
]
