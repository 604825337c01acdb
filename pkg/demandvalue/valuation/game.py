"""Forecast-accuracy coalition game over a demand panel."""

from demandvalue.core.coalition import Coalition
from demandvalue.core.game import ValuationGame
from demandvalue.core.series import DemandPanel, FloatArray, aggregate_series
from demandvalue.errors import DataError, InvalidInputError, UntrainableCoalitionError
from demandvalue.forecast.forecasters import Forecaster
from demandvalue.forecast.metrics import Metric
from demandvalue.infra.logging import get_logger

logger = get_logger(__name__)


class ForecastValueGame(ValuationGame):
    """
    v(K) = metric(ground truth over control, forecast from K's aggregate).

    The forecaster trains on the observation window of the summed series of
    the coalition members and is scored against the all-sources ground truth
    over the control window. Coalitions the forecaster cannot train on are
    worth 0.
    """

    def __init__(
        self,
        panel: DemandPanel,
        forecaster: Forecaster,
        metric: Metric,
        cache_enabled: bool = True,
        progress_every: int | None = None,
    ):
        if not panel.grid.is_split:
            raise InvalidInputError(
                "Panel grid has no control window; call split_windows first"
            )
        if panel.n_sources == 0:
            raise DataError("Panel has no sources", {"zone": panel.zone})
        truth = panel.ground_truth.counts[panel.grid.control]
        if not truth.any():
            raise DataError(
                "Ground truth has no demand in the control window",
                {"zone": panel.zone},
            )

        super().__init__(
            panel.n_sources,
            cache_enabled=cache_enabled,
            progress_every=progress_every,
        )
        self.panel = panel
        self.forecaster = forecaster
        self.metric = metric
        self.truth: FloatArray = truth

    def _value(self, coalition: Coalition) -> float:
        training = aggregate_series(self.panel, coalition)
        try:
            forecast = self.forecaster.fit_predict(training, self.panel.grid)
        except UntrainableCoalitionError:
            logger.debug(f"Coalition {coalition.label} is untrainable; valued at 0")
            return 0.0
        return float(self.metric(self.truth, forecast.values))


def coalition_value(game: ValuationGame, coalition: Coalition) -> float:
    """Memoized value of ``coalition`` in ``game``."""
    return game.evaluate(coalition)
