"""
Forecasters for aggregate demand.

A forecaster is trained on the observation window of a series and predicts
the control window of the same grid.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from demandvalue.core.grid import TimeGrid
from demandvalue.core.series import DemandSeries, FloatArray
from demandvalue.errors import ConfigError, InvalidInputError, UntrainableCoalitionError


@dataclass(frozen=True)
class Forecast:
    """Predicted values over the control window."""

    values: FloatArray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("Forecast contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


class Forecaster(ABC):
    """Deterministic ``fit_predict`` over a split grid."""

    name: ClassVar[str]
    min_weeks: ClassVar[int] = 1

    @abstractmethod
    def fit_predict(self, training: DemandSeries, grid: TimeGrid) -> Forecast:
        """Train on ``grid.observation`` of ``training`` and predict ``grid.control``."""

    def _training_weeks(self, training: DemandSeries, grid: TimeGrid) -> tuple[FloatArray, int]:
        """Complete weekly cycles ending at the control boundary.

        Returns:
            Tuple of (weeks matrix of shape (n_weeks, period), absolute index of
            its first bin)
        """
        if not grid.is_split:
            raise InvalidInputError("Forecasting needs a split grid")
        if len(training) != grid.n_bins:
            raise InvalidInputError("Training series does not match the grid")

        period = grid.bins_per_week
        observed = training.counts[grid.observation]
        n_weeks = len(observed) // period
        if n_weeks < self.min_weeks:
            raise InvalidInputError(
                f"{self.name} needs {self.min_weeks} complete weeks of observation",
                {"observation_bins": len(observed), "bins_per_week": period},
            )

        first = grid.observation_range[1] - n_weeks * period
        weeks = training.counts[first : grid.observation_range[1]].reshape(n_weeks, period)
        return weeks, first

    @staticmethod
    def _control_phase(grid: TimeGrid, first: int) -> np.ndarray:
        return (np.arange(*grid.control_range) - first) % grid.bins_per_week


class SeasonalProfileForecaster(Forecaster):
    """Hour-of-week mean profile scaled by the last week's level.

    prediction[t] = profile[phase(t)] * mean(last week) / mean(all weeks)
    """

    name = "seasonal_profile"
    min_weeks = 2

    def fit_predict(self, training: DemandSeries, grid: TimeGrid) -> Forecast:
        weeks, first = self._training_weeks(training, grid)

        level = weeks.mean()
        if level <= 0.0:
            raise UntrainableCoalitionError(
                "Training window has no demand", {"source": training.source}
            )

        profile = weeks.mean(axis=0)
        trend = weeks[-1].mean() / level
        predicted = profile[self._control_phase(grid, first)] * trend
        return Forecast(np.clip(predicted, 0.0, None))


class SeasonalNaiveForecaster(Forecaster):
    """Repeats the last observed week."""

    name = "seasonal_naive"
    min_weeks = 1

    def fit_predict(self, training: DemandSeries, grid: TimeGrid) -> Forecast:
        weeks, first = self._training_weeks(training, grid)
        last_week = weeks[-1]
        if not np.any(last_week > 0):
            raise UntrainableCoalitionError(
                "Last observed week has no demand", {"source": training.source}
            )
        first_of_last = first + (len(weeks) - 1) * grid.bins_per_week
        return Forecast(last_week[self._control_phase(grid, first_of_last)])


FORECASTERS: dict[str, type[Forecaster]] = {
    SeasonalProfileForecaster.name: SeasonalProfileForecaster,
    SeasonalNaiveForecaster.name: SeasonalNaiveForecaster,
}


def get_forecaster(name: str) -> Forecaster:
    """Instantiate a registered forecaster by name."""
    try:
        return FORECASTERS[name]()
    except KeyError:
        raise ConfigError(
            f"Unknown forecaster: {name}", {"available": sorted(FORECASTERS)}
        ) from None
