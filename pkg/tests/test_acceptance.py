"""
Statistical acceptance checks for the Shapley machinery.

These run many repetitions and are marked slow.
"""

import numpy as np
import pytest

from demandvalue.approx import approximate, mc_shapley, rs_plan, run_plan
from demandvalue.bench import (
    SaturatingGame,
    TableGame,
    evaluate_approximator,
    random_game,
    repetition_seeds,
)
from demandvalue.bench.synthetic import seasonal_panel
from demandvalue.core.series import CITY_WIDE
from demandvalue.forecast import dtw_distance, get_forecaster, get_metric
from demandvalue.schemas import AlgorithmSpec
from demandvalue.valuation import ForecastValueGame, exact_shapley
from tests.oracles import brute_force_dtw, permutation_shapley

pytestmark = pytest.mark.slow


def swapped(game: TableGame, a: int, b: int) -> TableGame:
    """Same game with players ``a`` and ``b`` relabelled."""
    masks = np.arange(len(game.table))
    bit_a = (masks >> a) & 1
    bit_b = (masks >> b) & 1
    moved = masks & ~((1 << a) | (1 << b)) | (bit_a << b) | (bit_b << a)
    return TableGame(game.table[moved])


def with_dummy(game: TableGame) -> TableGame:
    """Adds a last player who never changes any coalition's value."""
    return TableGame(np.concatenate([game.table, game.table]))


class TestShapleyAxioms:
    def test_axioms_on_random_games(self):
        for seed in range(200):
            n = 3 + seed % 8
            game = random_game(n, seed=seed)
            phi = exact_shapley(game)

            assert phi.sum() == pytest.approx(game.table[-1], abs=1e-9)

            symmetric = TableGame((game.table + swapped(game, 0, 1).table) / 2)
            phi_sym = exact_shapley(symmetric)
            assert phi_sym[0] == pytest.approx(phi_sym[1], abs=1e-9)

            phi_dummy = exact_shapley(with_dummy(game))
            assert phi_dummy[-1] == pytest.approx(0.0, abs=1e-9)
            np.testing.assert_allclose(phi_dummy[:-1], phi, atol=1e-9)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_matches_permutation_oracle(self, n):
        for seed in range(5):
            game = random_game(n, seed=100 + seed)
            np.testing.assert_allclose(exact_shapley(game), permutation_shapley(game), atol=1e-12)

    def test_additivity(self):
        a = random_game(6, seed=1)
        b = random_game(6, seed=2)

        combined = exact_shapley(TableGame(a.table + b.table))

        np.testing.assert_allclose(combined, exact_shapley(a) + exact_shapley(b), atol=1e-12)


class TestSamplingConsistency:
    @pytest.mark.parametrize("name", ["rs", "ss"])
    def test_large_plans_approach_exact(self, name):
        for seed in range(20):
            game = random_game(8, seed=seed, monotone=True)
            exact = exact_shapley(game)
            estimate = approximate(game, AlgorithmSpec(name=name, rounds=200, seed=seed)).phi

            value_range = np.ptp(game.table)
            assert np.abs(estimate - exact).mean() <= 0.02 * value_range

    def test_tau_one_equals_untruncated(self):
        for seed in range(5):
            game = SaturatingGame(10, seed=seed)
            plain = approximate(game, AlgorithmSpec(name="ss", rounds=3, seed=seed))
            truncated = approximate(game, AlgorithmSpec(name="tss", rounds=3, tau=1.0, seed=seed))

            np.testing.assert_array_equal(plain.phi, truncated.phi)


class TestEstimatorAccuracy:
    def test_monte_carlo_tight_threshold_matches_exact(self):
        for seed in range(5):
            game = random_game(6, seed=seed, monotone=True)

            result = mc_shapley(game, convergence_threshold=0.005, seed=seed)

            assert np.abs(result.phi - exact_shapley(game)).mean() <= 0.05

    def test_random_sampling_is_unbiased(self):
        game = SaturatingGame(5, seed=1)
        exact = exact_shapley(game)

        estimates = np.vstack(
            [run_plan(game, rs_plan(5, 1, seed=s)).phi for s in repetition_seeds(0, 400)]
        )

        standard_error = estimates.std(axis=0, ddof=1) / np.sqrt(len(estimates))
        assert np.all(np.abs(estimates.mean(axis=0) - exact) <= 4 * standard_error)


class TestStructuredSampling:
    def setup_method(self):
        self.game = SaturatingGame(16, beta=0.5, noise=0.3)
        self.exact = exact_shapley(self.game)

    def _evaluate(self, name: str, rounds: int, master_seed: int, repetitions: int = 50):
        spec = AlgorithmSpec(name=name, rounds=rounds, seed=0)
        return evaluate_approximator(self.game, spec, repetitions, self.exact, master_seed)

    def test_ss_beats_rs(self):
        aape_wins = 0
        aastd_wins = 0
        for seed in range(10):
            ss = self._evaluate("ss", 4, seed)
            rs = self._evaluate("rs", 4, seed)
            aape_wins += ss.aape <= rs.aape
            aastd_wins += ss.aastd <= rs.aastd

        assert aape_wins >= 8
        assert aastd_wins >= 8

    def test_ss_error_shrinks_with_rounds(self):
        assert self._evaluate("ss", 1, 0).aape <= 0.15
        assert self._evaluate("ss", 16, 0).aape <= 0.06


class TestTruncationTradeoff:
    def test_truncation_saves_evaluations(self):
        game = SaturatingGame(16, beta=0.9, noise=0.05)
        exact = exact_shapley(game)

        plain = evaluate_approximator(
            game, AlgorithmSpec(name="ss", rounds=4, seed=0), 10, exact, master_seed=1
        )
        truncated = evaluate_approximator(
            game, AlgorithmSpec(name="tss", rounds=4, tau=0.95, seed=0), 10, exact, master_seed=1
        )

        assert plain.mean_tte / truncated.mean_tte >= 4
        assert truncated.aape <= 3 * plain.aape


class TestMetricOracles:
    def test_dtw_matches_path_enumeration(self):
        rng = np.random.default_rng(77)
        for _ in range(100):
            m, n = rng.integers(1, 7, size=2)
            a = rng.integers(0, 10, size=m)
            b = rng.integers(0, 10, size=n)
            assert dtw_distance(a, b) == brute_force_dtw(a, b)


class TestForecasterSanity:
    def test_city_level_accuracy(self):
        forecaster = get_forecaster("seasonal_profile")
        metric = get_metric("cossim")
        for seed in range(20):
            panel = seasonal_panel(n_sources=3, sigma=0.1, seed=seed)[CITY_WIDE]
            game = ForecastValueGame(panel, forecaster, metric)
            assert game.grand_value() >= 0.95
