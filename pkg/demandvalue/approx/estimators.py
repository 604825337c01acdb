"""
Permutation-sampling Shapley estimators with optional truncation.

Every estimator walks permutations left to right, evaluating growing prefix
coalitions, and keeps a running mean of each player's marginal contribution.
With truncation active, once a prefix is worth more than ``tau * v(N)`` the
remaining players of that permutation get a zero marginal without evaluation.
"""

import threading
import time
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from demandvalue.approx.sampling import PLAN_BUILDERS, SamplePlan, SeedLike, random_permutation
from demandvalue.config import get_settings
from demandvalue.core.coalition import Coalition
from demandvalue.core.game import ValuationGame
from demandvalue.core.series import FloatArray
from demandvalue.errors import ConfigError, InvalidInputError
from demandvalue.infra.logging import get_logger, log_with_context
from demandvalue.schemas import AlgorithmSpec
from demandvalue.valuation.shapley import exact_shapley

logger = get_logger(__name__)

# Guards the relative-change test of the convergence rule near phi = 0
CONVERGENCE_DELTA = 1e-6


@dataclass(frozen=True)
class TruncationPolicy:
    """Skip the rest of a permutation once its prefix is worth ``tau * v(N)``."""

    enabled: bool = False
    tau: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.tau <= 1.0:
            raise InvalidInputError("tau must lie in (0, 1]", {"tau": self.tau})

    @classmethod
    def disabled(cls) -> "TruncationPolicy":
        return cls()

    def epsilon(self, v_full: float) -> float:
        return (1.0 - self.tau) * v_full

    def is_active(self, v_full: float) -> bool:
        """Truncation is a no-op at tau = 1 and meaningless for v(N) <= 0."""
        return self.enabled and self.tau < 1.0 and v_full > 0.0

    def threshold(self, v_full: float) -> float | None:
        """Prefix value above which the walk stops, or None when inactive."""
        if not self.is_active(v_full):
            return None
        return v_full - self.epsilon(v_full)


@dataclass
class ApproxResult:
    """Estimated Shapley values and what they cost."""

    phi: FloatArray
    tte: int
    permutations_used: int
    truncation_skips: int = 0
    algorithm: str = ""
    converged: bool | None = None


class _RunLedger:
    """Distinct coalitions requested during one estimator run."""

    def __init__(self, game: ValuationGame):
        self.game = game
        self._masks: set[int] = set()
        self._lock = threading.Lock()

    @property
    def tte(self) -> int:
        return len(self._masks)

    def value(self, mask: int) -> float:
        if mask == 0:
            return 0.0
        with self._lock:
            self._masks.add(mask)
        return self.game.evaluate(Coalition.from_mask(mask, self.game.n_players))


def _walk(
    ledger: _RunLedger, permutation: np.ndarray, threshold: float | None
) -> tuple[FloatArray, int]:
    """Marginal contribution of each player along one permutation."""
    n = len(permutation)
    marginals = np.zeros(n)
    mask = 0
    previous = 0.0
    for position, player in enumerate(permutation.tolist()):
        if threshold is not None and previous > threshold:
            return marginals, n - position
        mask |= 1 << player
        current = ledger.value(mask)
        marginals[player] = current - previous
        previous = current
    return marginals, 0


def _grand_value(ledger: _RunLedger, policy: TruncationPolicy) -> float | None:
    if not policy.enabled:
        return None
    return ledger.value((1 << ledger.game.n_players) - 1)


def run_plan(
    game: ValuationGame,
    plan: SamplePlan,
    policy: TruncationPolicy | None = None,
    workers: int = 1,
) -> ApproxResult:
    """
    Running-mean Shapley estimate over every permutation of ``plan``.

    Permutations may be walked concurrently; marginals are reduced in plan
    order so the estimate does not depend on ``workers``.
    """
    if plan.n_players != game.n_players:
        raise InvalidInputError(
            "Plan and game disagree on the number of players",
            {"plan": plan.n_players, "game": game.n_players},
        )
    policy = policy or TruncationPolicy.disabled()
    started = time.perf_counter()
    ledger = _RunLedger(game)

    v_full = _grand_value(ledger, policy)
    threshold = policy.threshold(v_full) if v_full is not None else None

    if workers > 1:
        walks = Parallel(n_jobs=workers, backend="threading")(
            delayed(_walk)(ledger, perm, threshold) for perm in plan.permutations
        )
    else:
        walks = [_walk(ledger, perm, threshold) for perm in plan.permutations]

    phi = np.zeros(game.n_players)
    skips = 0
    for t, (marginals, skipped) in enumerate(walks, start=1):
        phi = (t - 1) / t * phi + marginals / t
        skips += skipped

    name = f"t{plan.provenance}" if policy.enabled else plan.provenance
    log_with_context(
        logger,
        "debug",
        f"Walked {len(plan)} permutations",
        algorithm=name,
        tte=ledger.tte,
        truncation_skips=skips,
        elapsed_ms=round((time.perf_counter() - started) * 1000, 1),
    )
    return ApproxResult(
        phi=phi,
        tte=ledger.tte,
        permutations_used=len(plan),
        truncation_skips=skips,
        algorithm=name,
    )


def mc_shapley(
    game: ValuationGame,
    convergence_threshold: float,
    policy: TruncationPolicy | None = None,
    seed: SeedLike = None,
    min_permutations: int | None = None,
    max_permutations: int | None = None,
) -> ApproxResult:
    """
    Monte Carlo Shapley with a relative-change stopping rule.

    After ``min_permutations`` (default ``2n``) every new permutation checks
    ``max_i |delta phi_i| / (|phi_i| + 1e-6)`` and stops below
    ``convergence_threshold`` or at ``max_permutations``.
    """
    if not 0.0 < convergence_threshold < 1.0:
        raise InvalidInputError(
            "convergence_threshold must lie in (0, 1)",
            {"convergence_threshold": convergence_threshold},
        )
    n = game.n_players
    min_permutations = min_permutations or 2 * n
    max_permutations = max_permutations or get_settings().mc_max_permutations
    if max_permutations < min_permutations:
        raise InvalidInputError(
            "max_permutations is below min_permutations",
            {"min": min_permutations, "max": max_permutations},
        )
    policy = policy or TruncationPolicy.disabled()
    rng = np.random.default_rng(seed)
    ledger = _RunLedger(game)

    v_full = _grand_value(ledger, policy)
    threshold = policy.threshold(v_full) if v_full is not None else None

    phi = np.zeros(n)
    skips = 0
    converged = False
    t = 0
    while t < max_permutations:
        t += 1
        marginals, skipped = _walk(ledger, random_permutation(n, rng), threshold)
        skips += skipped
        updated = (t - 1) / t * phi + marginals / t
        change = np.max(np.abs(updated - phi) / (np.abs(updated) + CONVERGENCE_DELTA))
        phi = updated
        if t >= min_permutations and change < convergence_threshold:
            converged = True
            break

    if not converged:
        logger.warning(f"Monte Carlo stopped at {t} permutations without converging")

    return ApproxResult(
        phi=phi,
        tte=ledger.tte,
        permutations_used=t,
        truncation_skips=skips,
        algorithm="tmc" if policy.enabled else "mc",
        converged=converged,
    )


def approximate(
    game: ValuationGame,
    spec: AlgorithmSpec,
    workers: int = 1,
    exact_limit: int | None = None,
) -> ApproxResult:
    """Run the algorithm described by ``spec`` on ``game``."""
    policy = TruncationPolicy(enabled=spec.truncated, tau=spec.tau if spec.truncated else 1.0)

    if spec.sampler == "exact":
        phi = exact_shapley(game, exact_limit=exact_limit, workers=workers)
        return ApproxResult(
            phi=phi,
            tte=(1 << game.n_players) - 1,
            permutations_used=0,
            algorithm="exact",
        )

    if spec.sampler == "mc":
        return mc_shapley(
            game,
            spec.convergence_threshold,
            policy=policy,
            seed=spec.seed,
            min_permutations=spec.min_permutations,
            max_permutations=spec.max_permutations,
        )

    try:
        build = PLAN_BUILDERS[spec.sampler]
    except KeyError:
        raise ConfigError(f"Unknown algorithm: {spec.name}") from None
    plan = build(game.n_players, spec.rounds, spec.seed)
    return run_plan(game, plan, policy, workers=workers)
