"""
Synthetic demand panels.

Seeded generators for hour-of-week demand and the small toy panels that show
how pooling changes value: shape similarity, complementary coverage,
detrimental mixing and a low-volume source that alone covers night hours.
Every generator returns ``{zone: DemandPanel}`` on a split hourly grid.
"""

from collections.abc import Callable
from datetime import datetime, timedelta

import numpy as np

from demandvalue.core.grid import TimeGrid
from demandvalue.core.series import CITY_WIDE, DemandPanel, FloatArray, ZoneId
from demandvalue.errors import ConfigError

HOURS_PER_DAY = 24
HOURS_PER_WEEK = 7 * HOURS_PER_DAY

# A Monday, so hour-of-week 0 is Monday 00:00
DEFAULT_START = datetime(2019, 3, 4)

PanelSet = dict[ZoneId, DemandPanel]


def make_grid(
    weeks: int = 4, control_weeks: int = 2, start: datetime = DEFAULT_START
) -> TimeGrid:
    """Hourly grid of ``weeks`` weeks whose last ``control_weeks`` are the control window."""
    if not 0 < control_weeks < weeks:
        raise ConfigError(
            "Control weeks must leave a non-empty observation window",
            {"weeks": weeks, "control_weeks": control_weeks},
        )
    n_bins = weeks * HOURS_PER_WEEK
    grid = TimeGrid(start=start, n_bins=n_bins, bin_width=timedelta(hours=1))
    return grid.with_control_from((weeks - control_weeks) * HOURS_PER_WEEK)


def hour_of_week_profile(
    base: float = 10.0, daily_amplitude: float = 0.6, weekend_factor: float = 0.8
) -> FloatArray:
    """Smooth daily cycle peaking mid-afternoon, damped at weekends."""
    hours = np.arange(HOURS_PER_WEEK)
    hour_of_day = hours % HOURS_PER_DAY
    daily = 1.0 + daily_amplitude * np.sin(2 * np.pi * (hour_of_day - 9) / HOURS_PER_DAY)
    weekend = np.where(hours >= 5 * HOURS_PER_DAY, weekend_factor, 1.0)
    return base * daily * weekend


def weekly_pattern(hours_on: list[int] | range, level: float) -> FloatArray:
    """``level`` on the listed hours of every day, zero elsewhere."""
    day = np.zeros(HOURS_PER_DAY)
    day[list(hours_on)] = level
    return np.tile(day, 7)


def noisy_series(
    profile: FloatArray, weeks: int, sigma: float, rng: np.random.Generator
) -> FloatArray:
    """Repeat ``profile`` for ``weeks`` weeks with mean-one log-normal noise."""
    counts = np.tile(profile, weeks)
    if sigma > 0:
        counts = counts * rng.lognormal(-0.5 * sigma**2, sigma, size=counts.shape)
    return counts


def _panel(
    profiles: dict[str, FloatArray],
    zone: ZoneId = CITY_WIDE,
    weeks: int = 4,
    control_weeks: int = 2,
    sigma: float = 0.0,
    seed: int = 0,
) -> DemandPanel:
    grid = make_grid(weeks, control_weeks)
    rng = np.random.default_rng(seed)
    series = {source: noisy_series(p, weeks, sigma, rng) for source, p in profiles.items()}
    return DemandPanel.from_series(grid, zone, series)


def seasonal_panel(
    n_sources: int = 3, sigma: float = 0.1, seed: int = 0, weeks: int = 4
) -> PanelSet:
    """Sources sharing one hour-of-week profile at different volumes, with noise."""
    rng = np.random.default_rng(seed)
    profile = hour_of_week_profile()
    scales = rng.uniform(0.5, 2.0, size=n_sources)
    profiles = {f"S{i + 1}": profile * scale for i, scale in enumerate(scales)}
    return {CITY_WIDE: _panel(profiles, weeks=weeks, sigma=sigma, seed=seed + 1)}


def scaled_copies_panel(n_sources: int = 3, seed: int = 0) -> PanelSet:
    """Every source is an exact scaled copy of the same weekly profile."""
    profile = hour_of_week_profile()
    profiles = {f"S{i + 1}": profile * (i + 1) for i in range(n_sources)}
    return {CITY_WIDE: _panel(profiles, seed=seed)}


def shape_similarity_panel(seed: int = 0) -> PanelSet:
    """C2 follows the aggregate's day/night ratio; C1 is night-heavy."""
    day = range(6, 22)
    night = [h for h in range(HOURS_PER_DAY) if h not in day]
    profiles = {
        "BG": weekly_pattern(day, 10.0) + weekly_pattern(night, 5.0),
        "C1": weekly_pattern(day, 1.0) + weekly_pattern(night, 4.0),
        "C2": weekly_pattern(day, 2.0) + weekly_pattern(night, 1.0),
    }
    return {CITY_WIDE: _panel(profiles, seed=seed)}


def complementary_panel(seed: int = 0) -> PanelSet:
    """A covers the first half of every week, B the second half."""
    half = HOURS_PER_WEEK // 2
    first = np.zeros(HOURS_PER_WEEK)
    first[:half] = 4.0
    second = np.zeros(HOURS_PER_WEEK)
    second[half:] = 4.0
    return {CITY_WIDE: _panel({"A": first, "B": second}, seed=seed)}


def detrimental_mix_panel(seed: int = 0) -> PanelSet:
    """Adding the night-only C2 to the all-day C1 distorts the day/night gap."""
    day = range(6, 22)
    night = [h for h in range(HOURS_PER_DAY) if h not in day]
    profiles = {
        "BG": weekly_pattern(day, 30.0) + weekly_pattern(night, 10.0),
        "C1": weekly_pattern(day, 3.0) + weekly_pattern(night, 1.0),
        "C2": weekly_pattern(night, 4.0),
    }
    return {CITY_WIDE: _panel(profiles, seed=seed)}


def night_coverage_panel(seed: int = 0) -> PanelSet:
    """
    Five day sources (hours 4-23) and one night source (hour 2 only).

    The night source has the lowest volume but is the only one covering its
    hour.
    """
    day_hours = range(4, 24)
    day_totals = [240.0, 220.0, 200.0, 180.0, 160.0]
    profiles = {
        f"D{i + 1}": weekly_pattern(day_hours, total / (7 * len(day_hours)))
        for i, total in enumerate(day_totals)
    }
    profiles["N1"] = weekly_pattern([2], 150.0 / 7)
    return {CITY_WIDE: _panel(profiles, seed=seed)}


def multi_zone_panels(seed: int = 0) -> PanelSet:
    """Five zones with different cooperation structure.

    Z5 is sparse noise that no forecaster predicts well.
    """
    zones: PanelSet = {}
    for zone, panels in (
        ("Z1", complementary_panel(seed)),
        ("Z2", scaled_copies_panel(3, seed)),
        ("Z3", detrimental_mix_panel(seed)),
        ("Z4", shape_similarity_panel(seed)),
    ):
        panel = panels[CITY_WIDE]
        zones[zone] = DemandPanel.from_series(
            panel.grid, zone, {s: panel.series[i].counts for i, s in enumerate(panel.sources)}
        )

    rng = np.random.default_rng(seed)
    grid = make_grid()
    sparse = {f"S{i + 1}": rng.poisson(0.1, size=grid.n_bins).astype(float) for i in range(3)}
    zones["Z5"] = DemandPanel.from_series(grid, "Z5", sparse)
    return zones


SYNTHETIC_PANELS: dict[str, Callable[[int], PanelSet]] = {
    "seasonal": lambda seed: seasonal_panel(seed=seed),
    "scaled-copies": lambda seed: scaled_copies_panel(seed=seed),
    "shape-similarity": shape_similarity_panel,
    "complementary": complementary_panel,
    "detrimental-mix": detrimental_mix_panel,
    "night-coverage": night_coverage_panel,
    "multi-zone": multi_zone_panels,
}


def synthetic_panels(name: str, seed: int = 0) -> PanelSet:
    """Generate a named synthetic panel set."""
    try:
        generator = SYNTHETIC_PANELS[name]
    except KeyError:
        raise ConfigError(
            f"Unknown synthetic panel: {name}", {"available": sorted(SYNTHETIC_PANELS)}
        ) from None
    return generator(seed)
