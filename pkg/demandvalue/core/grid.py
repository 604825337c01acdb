"""Time grid with observation (training) and control (test) windows."""

from dataclasses import dataclass, replace
from datetime import datetime, timedelta

from demandvalue.errors import ConfigError

WEEK = timedelta(weeks=1)


@dataclass(frozen=True)
class TimeGrid:
    """Regular grid of ``n_bins`` bins of ``bin_width`` starting at ``start``.

    ``observation_range`` and ``control_range`` are half-open bin-index
    intervals. A freshly built grid observes everything and has an empty
    control window until :func:`demandvalue.ingest.split_windows` is applied.
    """

    start: datetime
    n_bins: int
    bin_width: timedelta = timedelta(hours=1)
    observation_range: tuple[int, int] = (0, 0)
    control_range: tuple[int, int] = (0, 0)

    def __post_init__(self) -> None:
        if self.n_bins < 1:
            raise ConfigError("Time grid needs at least one bin", {"n_bins": self.n_bins})
        if self.bin_width <= timedelta(0):
            raise ConfigError("Bin width must be positive")
        if self.observation_range == (0, 0) and self.control_range == (0, 0):
            object.__setattr__(self, "observation_range", (0, self.n_bins))
            object.__setattr__(self, "control_range", (self.n_bins, self.n_bins))

        obs_lo, obs_hi = self.observation_range
        ctl_lo, ctl_hi = self.control_range
        if not (0 == obs_lo <= obs_hi == ctl_lo <= ctl_hi == self.n_bins):
            raise ConfigError(
                "Observation window must end where the control window begins",
                {
                    "observation_range": self.observation_range,
                    "control_range": self.control_range,
                    "n_bins": self.n_bins,
                },
            )

    @classmethod
    def spanning(
        cls, start: datetime, end: datetime, bin_width: timedelta = timedelta(hours=1)
    ) -> "TimeGrid":
        """Grid covering ``[start, end)``; ``end - start`` must be a whole number of bins."""
        span = end - start
        if span <= timedelta(0) or span % bin_width:
            raise ConfigError(
                "Date range is not a positive whole number of bins",
                {"start": str(start), "end": str(end), "bin_width": str(bin_width)},
            )
        return cls(start=start, n_bins=span // bin_width, bin_width=bin_width)

    @property
    def end(self) -> datetime:
        return self.start + self.n_bins * self.bin_width

    @property
    def is_split(self) -> bool:
        """True when both windows are non-empty."""
        return self.n_observation > 0 and self.n_control > 0

    @property
    def n_observation(self) -> int:
        return self.observation_range[1] - self.observation_range[0]

    @property
    def n_control(self) -> int:
        return self.control_range[1] - self.control_range[0]

    @property
    def observation(self) -> slice:
        return slice(*self.observation_range)

    @property
    def control(self) -> slice:
        return slice(*self.control_range)

    @property
    def bins_per_week(self) -> int:
        """Seasonal period in bins; the bin width must divide one week."""
        if WEEK % self.bin_width:
            raise ConfigError(
                "Bin width does not divide a week", {"bin_width": str(self.bin_width)}
            )
        return WEEK // self.bin_width

    def bin_index(self, timestamp: datetime) -> int:
        """Index of the bin containing ``timestamp`` (may fall outside the grid)."""
        return (timestamp - self.start) // self.bin_width

    def timestamp(self, index: int) -> datetime:
        return self.start + index * self.bin_width

    def with_control_from(self, index: int) -> "TimeGrid":
        """Copy of the grid split at bin ``index``."""
        return replace(
            self,
            observation_range=(0, index),
            control_range=(index, self.n_bins),
        )
