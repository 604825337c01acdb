"""
Accuracy and cost of Shapley approximators against exact values.

Each repetition derives its own seed from the master seed, so results do not
depend on scheduling or on how many repetitions run in parallel.
"""

from collections.abc import Sequence
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
from joblib import Parallel, delayed

from demandvalue.approx.estimators import ApproxResult, approximate
from demandvalue.core.game import ValuationGame
from demandvalue.core.series import FloatArray
from demandvalue.errors import ConfigError, InvalidInputError
from demandvalue.infra.logging import get_logger, log_with_context
from demandvalue.schemas import TRUNCATED_ALGORITHMS, AlgorithmSpec

logger = get_logger(__name__)

# Exact values at or below this magnitude are left out of percentage errors
PERCENT_ERROR_FLOOR = 1e-6


@dataclass(frozen=True)
class ApproximatorEvaluation:
    """Error and cost of one algorithm configuration over repeated runs."""

    algorithm: str
    rounds: int | None
    tau: float | None
    convergence_threshold: float | None
    repetitions: int
    master_seed: int
    aaae: float
    aape: float
    aastd: float
    mean_tte: float
    mean_permutations: float
    mean_truncation_skips: float

    def to_row(self) -> dict[str, Any]:
        return asdict(self)


def repetition_seeds(master_seed: int, repetitions: int) -> list[int]:
    """Independent per-repetition seeds derived from ``master_seed``."""
    state = np.random.SeedSequence(master_seed).generate_state(repetitions)
    return [int(s) for s in state]


def approximation_errors(
    estimates: FloatArray, exact_phi: FloatArray
) -> tuple[float, float, float]:
    """AAAE, AAPE and AASTD of ``estimates`` (repetitions x players)."""
    estimates = np.asarray(estimates, dtype=np.float64)
    exact_phi = np.asarray(exact_phi, dtype=np.float64)
    if estimates.ndim != 2 or estimates.shape[1] != len(exact_phi):
        raise InvalidInputError(
            "Estimates must be a repetitions x players matrix matching exact_phi"
        )
    if estimates.shape[0] < 2:
        raise InvalidInputError("AASTD needs at least two repetitions")

    absolute = np.abs(estimates - exact_phi)
    aaae = float(absolute.mean(axis=1).mean())

    counted = np.abs(exact_phi) > PERCENT_ERROR_FLOOR
    if counted.any():
        percent = absolute[:, counted] / np.abs(exact_phi[counted])
        aape = float(percent.mean(axis=1).mean())
    else:
        aape = 0.0

    aastd = float(estimates.std(axis=0, ddof=1).mean())
    return aaae, aape, aastd


def evaluate_approximator(
    game: ValuationGame,
    spec: AlgorithmSpec,
    repetitions: int,
    exact_phi: FloatArray,
    master_seed: int,
    workers: int = 1,
) -> ApproximatorEvaluation:
    """
    Run ``spec`` ``repetitions`` times and compare with ``exact_phi``.

    Raises:
        InvalidInputError: Fewer than two repetitions or mismatched exact_phi
    """
    if repetitions < 2:
        raise InvalidInputError(
            "AASTD is undefined for fewer than two repetitions",
            {"repetitions": repetitions},
        )
    if len(exact_phi) != game.n_players:
        raise InvalidInputError(
            "exact_phi does not match the game",
            {"exact_phi": len(exact_phi), "n_players": game.n_players},
        )

    specs = [spec.with_seed(seed) for seed in repetition_seeds(master_seed, repetitions)]
    if workers > 1:
        results: list[ApproxResult] = Parallel(n_jobs=workers, backend="threading")(
            delayed(approximate)(game, s) for s in specs
        )
    else:
        results = [approximate(game, s) for s in specs]

    estimates = np.vstack([r.phi for r in results])
    aaae, aape, aastd = approximation_errors(estimates, exact_phi)
    params = spec.params()

    evaluation = ApproximatorEvaluation(
        algorithm=spec.name,
        rounds=params.get("rounds"),
        tau=params.get("tau"),
        convergence_threshold=params.get("convergence_threshold"),
        repetitions=repetitions,
        master_seed=master_seed,
        aaae=aaae,
        aape=aape,
        aastd=aastd,
        mean_tte=float(np.mean([r.tte for r in results])),
        mean_permutations=float(np.mean([r.permutations_used for r in results])),
        mean_truncation_skips=float(np.mean([r.truncation_skips for r in results])),
    )
    log_with_context(
        logger,
        "info",
        f"{spec.name}: AAPE {aape:.4f}, mean TtE {evaluation.mean_tte:.1f}",
        algorithm=spec.name,
        tte=int(round(evaluation.mean_tte)),
        evaluations=game.cache_size,
    )
    return evaluation


def truncation_sweep(
    game: ValuationGame,
    spec: AlgorithmSpec,
    taus: Sequence[float],
    repetitions: int,
    exact_phi: FloatArray,
    master_seed: int,
    workers: int = 1,
) -> list[ApproximatorEvaluation]:
    """Evaluate a truncated algorithm at each threshold in ``taus``.

    Every threshold reuses the same repetition seeds.
    """
    if spec.name not in TRUNCATED_ALGORITHMS:
        raise ConfigError(
            f"Truncation sweep needs a truncated algorithm, got {spec.name}",
            {"available": list(TRUNCATED_ALGORITHMS)},
        )
    return [
        evaluate_approximator(
            game,
            spec.model_copy(update={"tau": tau}),
            repetitions,
            exact_phi,
            master_seed,
            workers=workers,
        )
        for tau in taus
    ]
