"""Domain types shared by every module: grids, series, coalitions, games."""

from demandvalue.core.coalition import (
    Coalition,
    decode_key,
    empty_coalition,
    grand_coalition,
    make_coalition,
)
from demandvalue.core.game import ValuationGame
from demandvalue.core.grid import TimeGrid
from demandvalue.core.series import (
    CITY_WIDE,
    DemandPanel,
    DemandSeries,
    aggregate_series,
)

__all__ = [
    "CITY_WIDE",
    "Coalition",
    "DemandPanel",
    "DemandSeries",
    "TimeGrid",
    "ValuationGame",
    "aggregate_series",
    "decode_key",
    "empty_coalition",
    "grand_coalition",
    "make_coalition",
]
