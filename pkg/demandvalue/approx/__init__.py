"""Shapley approximation: Monte Carlo, random sampling and structured sampling."""

from demandvalue.approx.estimators import (
    ApproxResult,
    TruncationPolicy,
    approximate,
    mc_shapley,
    run_plan,
)
from demandvalue.approx.sampling import (
    SamplePlan,
    build_latin_square,
    fisher_yates_shuffle,
    rs_plan,
    ss_plan,
)

__all__ = [
    "ApproxResult",
    "SamplePlan",
    "TruncationPolicy",
    "approximate",
    "build_latin_square",
    "fisher_yates_shuffle",
    "mc_shapley",
    "rs_plan",
    "run_plan",
    "ss_plan",
]
