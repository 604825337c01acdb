"""Hourly binning of trips into per-source demand series and panels."""

from collections.abc import Iterable, Mapping
from datetime import datetime

import numpy as np
import pandas as pd

from demandvalue.core.grid import TimeGrid
from demandvalue.core.series import CITY_WIDE, DemandPanel, DemandSeries, SourceId, ZoneId
from demandvalue.errors import ConfigError, InvalidInputError
from demandvalue.infra.logging import get_logger
from demandvalue.ingest.loader import LoadedTrips, TripRecord

logger = get_logger(__name__)

TAIL_SOURCE: SourceId = "TAIL"

TripsLike = LoadedTrips | pd.DataFrame | Iterable[TripRecord]


def _as_frame(trips: TripsLike) -> pd.DataFrame:
    if isinstance(trips, LoadedTrips):
        return trips.frame
    if isinstance(trips, pd.DataFrame):
        return trips
    rows = [(t.start_time, t.source_id, t.zone_id) for t in trips]
    return pd.DataFrame(rows, columns=["start_time", "source_id", "zone_id"])


def bin_demand(
    trips: TripsLike,
    grid: TimeGrid,
    zone_filter: ZoneId | None = None,
) -> dict[SourceId, DemandSeries]:
    """
    Count trips per source and grid bin.

    Each trip adds one to the bin holding its start time. Trips outside the
    grid or the zone filter are ignored; sources without surviving trips are
    omitted. Keys are ordered lexicographically by source id.
    """
    frame = _as_frame(trips)
    zone = zone_filter if zone_filter is not None else CITY_WIDE
    if zone_filter is not None:
        frame = frame[frame["zone_id"] == zone_filter]
    if frame.empty:
        return {}

    offsets = pd.to_datetime(frame["start_time"]) - pd.Timestamp(grid.start)
    index = (offsets // pd.Timedelta(grid.bin_width)).to_numpy(dtype=np.int64)
    inside = (index >= 0) & (index < grid.n_bins)
    if not inside.all():
        logger.debug(f"Ignoring {int((~inside).sum())} trips outside the grid")

    binned = pd.DataFrame(
        {"source_id": frame["source_id"].to_numpy()[inside], "bin": index[inside]}
    )

    result: dict[SourceId, DemandSeries] = {}
    for source, group in binned.groupby("source_id", sort=True):
        counts = np.bincount(group["bin"].to_numpy(), minlength=grid.n_bins)
        result[str(source)] = DemandSeries(source=str(source), zone=zone, counts=counts)
    return result


def top_k_with_tail(
    series_by_source: Mapping[SourceId, DemandSeries], k: int
) -> dict[SourceId, DemandSeries]:
    """
    Keep the ``k`` busiest sources and sum the rest into ``TAIL``.

    Ties on total count are broken by source id. No tail is added when at
    most ``k`` sources exist.
    """
    if k < 1:
        raise InvalidInputError("top_k must be at least 1", {"k": k})

    ranked = sorted(series_by_source.values(), key=lambda s: (-s.total, s.source))
    kept = ranked[:k]
    rest = ranked[k:]

    result = {s.source: s for s in kept}
    if rest:
        if TAIL_SOURCE in result:
            raise InvalidInputError(f"Source id {TAIL_SOURCE} is reserved for the tail")
        tail = np.sum([s.counts for s in rest], axis=0)
        result[TAIL_SOURCE] = DemandSeries(source=TAIL_SOURCE, zone=rest[0].zone, counts=tail)
    return result


def split_windows(grid: TimeGrid, control_start: datetime) -> TimeGrid:
    """Split the grid into observation ``[0, idx)`` and control ``[idx, n)``.

    Raises:
        ConfigError: If ``control_start`` is off a bin boundary or not
            strictly inside the grid
    """
    offset = control_start - grid.start
    if offset % grid.bin_width:
        raise ConfigError(
            "Control start is not aligned to a bin boundary",
            {"control_start": str(control_start), "bin_width": str(grid.bin_width)},
        )
    index = grid.bin_index(control_start)
    if not 0 < index < grid.n_bins:
        raise ConfigError(
            "Control start must lie strictly inside the grid",
            {"control_start": str(control_start), "start": str(grid.start), "end": str(grid.end)},
        )
    return grid.with_control_from(index)


def build_panel(
    trips: TripsLike,
    grid: TimeGrid,
    zone: ZoneId | None = None,
    top_k: int | None = None,
) -> DemandPanel:
    """Bin trips for one zone (or city-wide) and optionally fold the tail."""
    series = bin_demand(trips, grid, zone_filter=zone)
    if top_k is not None:
        series = top_k_with_tail(series, top_k)
    return DemandPanel.from_series(grid, zone if zone is not None else CITY_WIDE, series)


def build_zone_panels(
    trips: TripsLike,
    grid: TimeGrid,
    zones: Iterable[ZoneId] | None = None,
    top_k: int | None = None,
) -> dict[ZoneId, DemandPanel]:
    """One panel per zone, keyed in lexicographic zone order."""
    frame = _as_frame(trips)
    if zones is None:
        zones = frame["zone_id"].unique().tolist()
    panels = {}
    for zone in sorted(set(zones)):
        panel = build_panel(frame, grid, zone=zone, top_k=top_k)
        if panel.n_sources:
            panels[zone] = panel
    return panels


def panel_summary(panel: DemandPanel) -> pd.DataFrame:
    """Per-source ride totals and percentage of the panel total."""
    totals = panel.totals()
    grand = totals.sum()
    pct = totals / grand * 100.0 if grand > 0 else np.zeros_like(totals)
    return pd.DataFrame(
        {
            "zone_id": panel.zone,
            "source_id": list(panel.sources),
            "rides": totals,
            "rides_pct": pct,
        }
    )
