"""
Tests for the time grid, demand panels and the memoized game.
"""

import threading
from datetime import datetime, timedelta

import numpy as np
import pytest

from demandvalue.core.coalition import make_coalition
from demandvalue.core.game import ValuationGame
from demandvalue.core.grid import TimeGrid
from demandvalue.core.series import DemandPanel, DemandSeries, aggregate_series
from demandvalue.errors import ConfigError, DataError, InvalidInputError


class CountingGame(ValuationGame):
    """v(K) = |K| with a record of every computation."""

    def __init__(self, n_players: int, **kwargs):
        super().__init__(n_players, **kwargs)
        self.calls = 0
        self._calls_lock = threading.Lock()

    def _value(self, coalition):
        with self._calls_lock:
            self.calls += 1
        return float(len(coalition))


class TestTimeGrid:
    def setup_method(self):
        self.start = datetime(2019, 3, 4)

    def test_fresh_grid_observes_everything(self):
        grid = TimeGrid(self.start, n_bins=24)

        assert grid.observation_range == (0, 24)
        assert grid.control_range == (24, 24)
        assert not grid.is_split
        assert grid.end == self.start + timedelta(hours=24)

    def test_with_control_from(self):
        grid = TimeGrid(self.start, n_bins=24).with_control_from(16)

        assert grid.is_split
        assert grid.n_observation == 16
        assert grid.n_control == 8
        assert grid.control == slice(16, 24)

    def test_spanning(self):
        grid = TimeGrid.spanning(self.start, self.start + timedelta(days=2), timedelta(hours=2))

        assert grid.n_bins == 24
        assert grid.bins_per_week == 84

    def test_spanning_rejects_partial_bins(self):
        with pytest.raises(ConfigError, match="whole number of bins"):
            TimeGrid.spanning(self.start, self.start + timedelta(minutes=90))

    def test_rejects_gap_between_windows(self):
        with pytest.raises(ConfigError, match="control window begins"):
            TimeGrid(self.start, 10, observation_range=(0, 4), control_range=(5, 10))

    def test_rejects_empty_grid(self):
        with pytest.raises(ConfigError, match="at least one bin"):
            TimeGrid(self.start, 0)

    def test_bin_index_floors(self):
        grid = TimeGrid(self.start, n_bins=24)

        assert grid.bin_index(self.start + timedelta(minutes=59)) == 0
        assert grid.bin_index(self.start + timedelta(hours=5, minutes=1)) == 5
        assert grid.bin_index(self.start - timedelta(minutes=1)) == -1
        assert grid.timestamp(5) == self.start + timedelta(hours=5)

    def test_bins_per_week_needs_divisor(self):
        grid = TimeGrid(self.start, n_bins=10, bin_width=timedelta(hours=5))

        with pytest.raises(ConfigError, match="does not divide a week"):
            grid.bins_per_week


class TestDemandPanel:
    def setup_method(self):
        self.grid = TimeGrid(datetime(2019, 3, 4), n_bins=4)
        self.panel = DemandPanel.from_series(
            self.grid, "8", {"A": [1, 0, 2, 0], "B": [0, 3, 1, 1], "C": [1, 1, 1, 1]}
        )

    def test_ground_truth_is_sum(self):
        np.testing.assert_array_equal(self.panel.ground_truth.counts, [2, 4, 4, 2])
        np.testing.assert_array_equal(self.panel.totals(), [3, 5, 4])

    def test_series_are_read_only(self):
        with pytest.raises(ValueError):
            self.panel.matrix[0, 0] = 5.0

    def test_aggregate_series(self):
        series = aggregate_series(self.panel, make_coalition([0, 2], 3))

        np.testing.assert_array_equal(series.counts, [2, 1, 3, 1])

    def test_aggregate_empty_is_zero(self):
        series = aggregate_series(self.panel, make_coalition([], 3))

        np.testing.assert_array_equal(series.counts, np.zeros(4))

    def test_aggregate_wrong_panel(self):
        with pytest.raises(InvalidInputError, match="different panel"):
            aggregate_series(self.panel, make_coalition([0], 4))

    def test_index_of(self):
        assert self.panel.index_of("B") == 1
        with pytest.raises(DataError, match="Unknown source"):
            self.panel.index_of("Z")

    def test_rejects_negative_counts(self):
        with pytest.raises(InvalidInputError, match="non-negative"):
            DemandSeries("A", "8", [1, -1])

    def test_rejects_length_mismatch(self):
        with pytest.raises(InvalidInputError, match="length differs"):
            DemandPanel.from_series(self.grid, "8", {"A": [1, 2, 3]})

    def test_rejects_duplicate_sources(self):
        series = DemandSeries("A", "8", [1, 1, 1, 1])
        with pytest.raises(InvalidInputError, match="unique"):
            DemandPanel(self.grid, "8", ("A", "A"), (series, series))


class TestValuationGame:
    def test_cache_counts_distinct_coalitions(self):
        game = CountingGame(3)

        assert game.value_of([0, 1]) == 2.0
        assert game.value_of([1, 0]) == 2.0
        assert game.value_of([2]) == 1.0

        assert game.tte_counter == 2
        assert game.calls == 2
        assert game.cache_size == 2

    def test_empty_coalition_is_free(self):
        game = CountingGame(3)

        assert game.value_of([]) == 0.0
        assert game.tte_counter == 0

    def test_cache_disabled_recomputes(self):
        game = CountingGame(2, cache_enabled=False)

        game.value_of([0])
        game.value_of([0])

        assert game.tte_counter == 2
        assert game.cache_size == 0

    def test_foreign_coalition_rejected(self):
        game = CountingGame(3)

        with pytest.raises(InvalidInputError, match="different game"):
            game.evaluate(make_coalition([0], 4))

    def test_needs_a_player(self):
        with pytest.raises(InvalidInputError, match="at least one player"):
            CountingGame(0)

    def test_concurrent_evaluation_counts_once(self):
        game = CountingGame(6)
        masks = [list(range(k)) for k in range(1, 7)] * 20

        threads = [
            threading.Thread(target=lambda chunk=masks[i::8]: [game.value_of(m) for m in chunk])
            for i in range(8)
        ]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()

        assert game.tte_counter == 6
        assert game.cache_size == 6
        assert game.grand_value() == 6.0
