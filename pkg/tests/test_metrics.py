"""
Tests for the similarity metrics.
"""

import numpy as np
import pytest

from demandvalue.errors import ConfigError, InvalidInputError
from demandvalue.forecast.metrics import (
    cosine_similarity,
    dtw_distance,
    get_metric,
    max_normalize,
    mean_normalize,
    numerical_similarity,
    relative_dtw,
)
from tests.oracles import brute_force_dtw


class TestCosineSimilarity:
    def test_known_value(self):
        assert cosine_similarity([1, 1], [1, 0]) == pytest.approx(0.70710678)

    def test_identical_and_scaled(self):
        assert cosine_similarity([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)
        assert cosine_similarity([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)

    def test_zero_vector(self):
        assert cosine_similarity([1, 2], [0, 0]) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(InvalidInputError, match="non-negative"):
            cosine_similarity([1, -1], [1, 1])

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError, match="differ in length"):
            cosine_similarity([1, 2], [1, 2, 3])

    def test_empty(self):
        with pytest.raises(InvalidInputError, match="empty"):
            cosine_similarity([], [])


class TestNumericalSimilarity:
    def test_identical_shape(self):
        assert numerical_similarity([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)

    def test_disjoint_support(self):
        assert numerical_similarity([1, 0], [0, 1]) == pytest.approx(0.0)

    def test_zero_prediction(self):
        assert numerical_similarity([1, 1], [0, 0]) == pytest.approx(0.0)

    def test_zero_terms_skipped(self):
        # Second bin is 0/0 and contributes nothing
        assert numerical_similarity([2, 0, 2], [2, 0, 2]) == pytest.approx(1.0)

    def test_bounded(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a, b = rng.uniform(0, 5, size=(2, 12))
            assert 0.0 <= numerical_similarity(a, b) <= 1.0


class TestDTW:
    def test_known_values(self):
        assert dtw_distance([0, 0], [1, 1]) == pytest.approx(2.0)
        assert dtw_distance([1, 2], [1, 1, 2]) == pytest.approx(0.0)

    def test_matches_path_enumeration(self):
        rng = np.random.default_rng(11)
        for m, n in [(1, 4), (3, 3), (4, 2), (5, 4)]:
            a = rng.uniform(0, 3, size=m)
            b = rng.uniform(0, 3, size=n)
            assert dtw_distance(a, b) == pytest.approx(brute_force_dtw(a, b))

    def test_bounded_by_diagonal_path(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            n = int(rng.integers(1, 30))
            a, b = rng.uniform(0, 5, size=(2, n))
            assert dtw_distance(a, b) <= np.abs(a - b).sum() + 1e-12

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            dtw_distance([], [1])


class TestRelativeDTW:
    def test_perfect(self):
        assert relative_dtw([1, 3, 2], [2, 6, 4]) == pytest.approx(1.0)

    def test_zero_prediction(self):
        assert relative_dtw([1, 3, 2], [0, 0, 0]) == pytest.approx(0.0)

    def test_can_be_negative(self):
        # Normalized [0, 2] vs [2, 0]: every path costs 4, the zero reference 2
        assert brute_force_dtw([0, 2], [2, 0]) == pytest.approx(4.0)
        assert relative_dtw([0, 2], [2, 0]) == pytest.approx(-1.0)

    def test_zero_truth(self):
        with pytest.raises(InvalidInputError, match="all-zero truth"):
            relative_dtw([0, 0], [1, 1])


class TestMetricLookup:
    def test_names(self):
        assert get_metric("cossim") is cosine_similarity
        assert get_metric("numsim") is numerical_similarity
        assert get_metric("rdtw") is relative_dtw

    def test_normalization_bound(self):
        metric = get_metric("numsim", "max")

        assert metric([1, 2], [2, 4]) == pytest.approx(1.0)
        assert metric([1, 2], [2, 2]) == pytest.approx(1 - (1 / 3) / 2)

    @pytest.mark.parametrize("name", ["numsim", "rdtw"])
    @pytest.mark.parametrize("normalization", ["mean", "max", "l2"])
    def test_shape_metrics_ignore_separate_scales(self, name, normalization):
        metric = get_metric(name, normalization)
        rng = np.random.default_rng(5)
        for _ in range(10):
            a, b = rng.uniform(0.1, 5, size=(2, 24))
            truth_scale, pred_scale = rng.uniform(0.1, 10, size=2)
            assert metric(truth_scale * a, pred_scale * b) == pytest.approx(metric(a, b))

    def test_cossim_ignores_normalization(self):
        assert get_metric("cossim", "l2") is cosine_similarity

    def test_unknown_metric(self):
        with pytest.raises(ConfigError, match="Unknown metric"):
            get_metric("mape")

    def test_unknown_normalization(self):
        with pytest.raises(ConfigError, match="Unknown normalization"):
            get_metric("rdtw", "zscore")

    def test_normalizers(self):
        np.testing.assert_allclose(mean_normalize(np.array([1.0, 3.0])), [0.5, 1.5])
        np.testing.assert_allclose(max_normalize(np.array([1.0, 4.0])), [0.25, 1.0])
        np.testing.assert_array_equal(mean_normalize(np.zeros(2)), [0.0, 0.0])
