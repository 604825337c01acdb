"""Agreement of Shapley shares across similarity metrics."""

from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import pandas as pd
from sklearn.linear_model import LinearRegression

from demandvalue.approx.estimators import approximate
from demandvalue.core.series import DemandPanel, FloatArray
from demandvalue.forecast.forecasters import get_forecaster
from demandvalue.forecast.metrics import get_metric
from demandvalue.schemas import AlgorithmSpec
from demandvalue.valuation.game import ForecastValueGame


@dataclass
class MetricComparison:
    shares: pd.DataFrame
    r2: dict[tuple[str, str], float] = field(default_factory=dict)
    top_overlap: dict[tuple[str, str], float] = field(default_factory=dict)
    tte: dict[str, int] = field(default_factory=dict)

    def pairs_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {"metric_a": a, "metric_b": b, "r2": r2, "top_overlap": self.top_overlap[(a, b)]}
                for (a, b), r2 in self.r2.items()
            ],
            columns=["metric_a", "metric_b", "r2", "top_overlap"],
        )


# Share vectors spreading less than this are treated as constant
CONSTANT_SPREAD = 1e-12


def _shares(phi: FloatArray) -> FloatArray:
    total = phi.sum()
    return phi / total if total != 0 else np.zeros_like(phi)


def linear_r2(x: FloatArray, y: FloatArray) -> float:
    """
    Coefficient of determination of the least-squares line through (x, y).

    Equals the squared Pearson correlation, so it is symmetric and lies in
    [0, 1]. Two constant vectors agree fully (1.0); a constant vector
    explains nothing of a varying one (0.0).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    x_flat = np.ptp(x) <= CONSTANT_SPREAD
    y_flat = np.ptp(y) <= CONSTANT_SPREAD
    if x_flat or y_flat:
        return 1.0 if x_flat and y_flat else 0.0
    features = x.reshape(-1, 1)
    score = LinearRegression().fit(features, y).score(features, y)
    return float(min(max(score, 0.0), 1.0))


def top_sources(shares: pd.Series, k: int) -> set[str]:
    """The ``k`` largest shares; ties keep panel order."""
    order = np.argsort(-shares.to_numpy(), kind="stable")[:k]
    return {shares.index[i] for i in order}


def metric_cross_validation(
    panel: DemandPanel,
    spec: AlgorithmSpec,
    metrics: Sequence[str] = ("cossim", "numsim", "rdtw"),
    forecaster: str = "seasonal_profile",
    top_k: int = 4,
    normalization: str = "mean",
    workers: int = 1,
) -> MetricComparison:
    """
    Shapley shares of every source under each metric.

    Pairs are compared by the squared linear correlation of their share
    vectors and by top-k set overlap.
    """
    model = get_forecaster(forecaster)
    columns: dict[str, FloatArray] = {}
    tte: dict[str, int] = {}
    for name in metrics:
        game = ForecastValueGame(panel, model, get_metric(name, normalization))
        result = approximate(game, spec, workers=workers)
        columns[name] = _shares(result.phi)
        tte[name] = result.tte

    shares = pd.DataFrame(columns, index=pd.Index(panel.sources, name="source_id"))
    k = min(top_k, panel.n_sources)

    comparison = MetricComparison(shares=shares, tte=tte)
    for a, b in combinations(metrics, 2):
        comparison.r2[(a, b)] = linear_r2(shares[a].to_numpy(), shares[b].to_numpy())
        overlap = top_sources(shares[a], k) & top_sources(shares[b], k)
        comparison.top_overlap[(a, b)] = len(overlap) / k
    return comparison
