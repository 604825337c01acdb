"""Demand series and panels: per-source hourly counts on a shared time grid."""

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import NDArray

from demandvalue.core.grid import TimeGrid
from demandvalue.errors import DataError, InvalidInputError

if TYPE_CHECKING:
    from demandvalue.core.coalition import Coalition

FloatArray = NDArray[np.float64]

SourceId = str
ZoneId = str

CITY_WIDE: ZoneId = "city"


def _frozen_counts(values: object) -> FloatArray:
    counts = np.array(values, dtype=np.float64)
    if counts.ndim != 1:
        raise InvalidInputError("Demand counts must be one-dimensional")
    if not np.all(np.isfinite(counts)) or np.any(counts < 0):
        raise InvalidInputError("Demand counts must be finite and non-negative")
    counts.setflags(write=False)
    return counts


@dataclass(frozen=True)
class DemandSeries:
    """Count series of one source in one zone, indexed by grid bin."""

    source: SourceId
    zone: ZoneId
    counts: FloatArray

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", _frozen_counts(self.counts))

    def __len__(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> float:
        return float(self.counts.sum())


@dataclass(frozen=True)
class DemandPanel:
    """All sources of one zone on a common grid.

    Source order is fixed at construction; coalition indices refer to it.
    """

    grid: TimeGrid
    zone: ZoneId
    sources: tuple[SourceId, ...]
    series: tuple[DemandSeries, ...]
    ground_truth: DemandSeries = field(init=False)
    matrix: FloatArray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.sources) != len(self.series):
            raise InvalidInputError("One series per source is required")
        if len(set(self.sources)) != len(self.sources):
            raise InvalidInputError("Source identifiers must be unique")
        for source, item in zip(self.sources, self.series, strict=True):
            if item.source != source:
                raise InvalidInputError(
                    "Series order does not match source order",
                    {"expected": source, "found": item.source},
                )
            if len(item) != self.grid.n_bins:
                raise InvalidInputError(
                    "Series length differs from the grid",
                    {"source": source, "length": len(item), "n_bins": self.grid.n_bins},
                )

        if self.series:
            matrix = np.vstack([item.counts for item in self.series])
        else:
            matrix = np.zeros((0, self.grid.n_bins))
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(
            self,
            "ground_truth",
            DemandSeries(source="ALL", zone=self.zone, counts=matrix.sum(axis=0)),
        )

    @classmethod
    def from_series(
        cls,
        grid: TimeGrid,
        zone: ZoneId,
        series_by_source: Mapping[SourceId, DemandSeries | FloatArray],
    ) -> "DemandPanel":
        """Build a panel keeping the mapping's iteration order."""
        sources = tuple(series_by_source)
        series = tuple(
            item
            if isinstance(item, DemandSeries)
            else DemandSeries(source=source, zone=zone, counts=item)
            for source, item in series_by_source.items()
        )
        return cls(grid=grid, zone=zone, sources=sources, series=series)

    @property
    def n_sources(self) -> int:
        return len(self.sources)

    def totals(self) -> FloatArray:
        """Per-source total counts over the full grid."""
        return self.matrix.sum(axis=1)

    def index_of(self, source: SourceId) -> int:
        try:
            return self.sources.index(source)
        except ValueError:
            raise DataError(f"Unknown source: {source}") from None


def aggregate_series(panel: DemandPanel, coalition: "Coalition") -> DemandSeries:
    """Element-wise sum of the member series; the empty coalition sums to zeros."""
    if coalition.n_players != panel.n_sources:
        raise InvalidInputError(
            "Coalition was built for a different panel",
            {"n_players": coalition.n_players, "n_sources": panel.n_sources},
        )
    members = list(coalition.members)
    counts = (
        panel.matrix[members].sum(axis=0) if members else np.zeros(panel.grid.n_bins)
    )
    return DemandSeries(source=f"K:{coalition.label}", zone=panel.zone, counts=counts)
