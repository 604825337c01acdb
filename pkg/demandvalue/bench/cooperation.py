"""Benefit of pooling data per zone and how many sources gain from it."""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from demandvalue.config import get_settings
from demandvalue.core.game import ValuationGame
from demandvalue.core.series import DemandPanel, ZoneId
from demandvalue.errors import DataError, InvalidInputError
from demandvalue.forecast.forecasters import get_forecaster
from demandvalue.forecast.metrics import get_metric
from demandvalue.infra.logging import get_logger, log_with_context
from demandvalue.valuation.game import ForecastValueGame

logger = get_logger(__name__)

STATUS_OK = "ok"
STATUS_INSUFFICIENT = "insufficient_accuracy"
STATUS_NO_DEMAND = "no_control_demand"


@dataclass
class CooperationAnalysis:
    """Pooled versus solo accuracy in one zone."""

    zone: ZoneId
    status: str
    v_all: float | None = None
    solo_values: dict[str, float] = field(default_factory=dict)
    benefit: float | None = None
    willing: dict[float, int] = field(default_factory=dict)

    def to_rows(self) -> list[dict[str, Any]]:
        """One row per threshold (or a single row when no threshold applies)."""
        base = {
            "zone_id": self.zone,
            "status": self.status,
            "n_sources": len(self.solo_values),
            "v_all": self.v_all,
            "mean_solo": float(np.mean(list(self.solo_values.values())))
            if self.solo_values
            else None,
            "benefit": self.benefit,
        }
        if not self.willing:
            return [{**base, "threshold": None, "willing": None}]
        return [
            {**base, "threshold": threshold, "willing": count}
            for threshold, count in sorted(self.willing.items())
        ]


def analyze_cooperation(
    zone: ZoneId,
    game: ValuationGame,
    thresholds: Sequence[float],
    accuracy_floor: float | None = None,
    sources: Sequence[str] | None = None,
) -> CooperationAnalysis:
    """
    Compare ``v(N)`` with every singleton value of ``game``.

    Uses ``n + 1`` evaluations. Zones whose pooled value is below the
    accuracy floor are reported without a benefit.
    """
    if game.n_players < 2:
        raise InvalidInputError(
            "Cooperation needs at least two sources", {"zone": zone}
        )
    floor = accuracy_floor if accuracy_floor is not None else get_settings().accuracy_floor
    names = list(sources) if sources is not None else [str(i) for i in range(game.n_players)]

    v_all = game.grand_value()
    solo = {names[i]: game.value_of([i]) for i in range(game.n_players)}

    if v_all < floor:
        log_with_context(
            logger, "info", f"Zone below accuracy floor ({v_all:.3f} < {floor})", zone=zone
        )
        return CooperationAnalysis(zone=zone, status=STATUS_INSUFFICIENT, v_all=v_all, solo_values=solo)

    gains = v_all - np.array(list(solo.values()))
    return CooperationAnalysis(
        zone=zone,
        status=STATUS_OK,
        v_all=v_all,
        solo_values=solo,
        benefit=float(v_all - np.mean(list(solo.values()))),
        willing={float(t): int(np.sum(gains >= t)) for t in thresholds},
    )


def cooperation_benefit(
    panels: Mapping[ZoneId, DemandPanel],
    thresholds: Sequence[float],
    forecaster: str = "seasonal_profile",
    metric: str = "cossim",
    accuracy_floor: float | None = None,
    normalization: str = "mean",
) -> list[CooperationAnalysis]:
    """Cooperation analysis for every zone, in zone order."""
    model = get_forecaster(forecaster)
    scorer = get_metric(metric, normalization)

    analyses = []
    for zone in sorted(panels):
        panel = panels[zone]
        try:
            game = ForecastValueGame(panel, model, scorer)
        except DataError as e:
            logger.warning(f"Skipping zone {zone}: {e.message}")
            analyses.append(CooperationAnalysis(zone=zone, status=STATUS_NO_DEMAND))
            continue
        analyses.append(
            analyze_cooperation(zone, game, thresholds, accuracy_floor, sources=panel.sources)
        )
    return analyses
