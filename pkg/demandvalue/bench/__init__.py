"""Experiment harness: synthetic games and panels, approximator benchmarks and analyses."""

from demandvalue.bench.approximators import (
    ApproximatorEvaluation,
    approximation_errors,
    evaluate_approximator,
    repetition_seeds,
    truncation_sweep,
)
from demandvalue.bench.cooperation import (
    CooperationAnalysis,
    analyze_cooperation,
    cooperation_benefit,
)
from demandvalue.bench.games import (
    AdditiveGame,
    ComplementaryPairGame,
    DetrimentalMixGame,
    SaturatingGame,
    TableGame,
    UnanimityGame,
    random_game,
)
from demandvalue.bench.metric_compare import MetricComparison, metric_cross_validation
from demandvalue.bench.retail import PimsOutcome, accuracy_probability_curve, pims_select
from demandvalue.bench.synthetic import SYNTHETIC_PANELS, make_grid, synthetic_panels

__all__ = [
    "SYNTHETIC_PANELS",
    "AdditiveGame",
    "ApproximatorEvaluation",
    "ComplementaryPairGame",
    "CooperationAnalysis",
    "DetrimentalMixGame",
    "MetricComparison",
    "PimsOutcome",
    "SaturatingGame",
    "TableGame",
    "UnanimityGame",
    "accuracy_probability_curve",
    "analyze_cooperation",
    "approximation_errors",
    "cooperation_benefit",
    "evaluate_approximator",
    "make_grid",
    "metric_cross_validation",
    "pims_select",
    "random_game",
    "repetition_seeds",
    "synthetic_panels",
    "truncation_sweep",
]
