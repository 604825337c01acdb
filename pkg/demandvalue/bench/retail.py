"""
Retail (per-driver) data selection.

A buyer adds random batches of drivers until the pooled data reaches an
accuracy target. Both analyses draw coalitions as prefixes of seeded random
permutations, so larger coalitions always contain the smaller ones drawn
from the same permutation.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd

from demandvalue.approx.sampling import random_permutation
from demandvalue.core.coalition import Coalition, make_coalition
from demandvalue.core.game import ValuationGame
from demandvalue.errors import InvalidInputError
from demandvalue.infra.logging import get_logger

logger = get_logger(__name__)


def accuracy_probability_curve(
    game: ValuationGame,
    k_values: Sequence[int],
    samples_per_k: int,
    target_fraction: float,
    seed: int,
) -> pd.DataFrame:
    """
    Probability that a random k-coalition reaches ``target_fraction * v(N)``.

    Sample ``s`` uses the first ``k`` players of permutation ``s`` for every
    ``k``, which is a uniform k-subset.

    Returns:
        DataFrame with columns k, probability, samples
    """
    n = game.n_players
    if not 0.0 < target_fraction <= 1.0:
        raise InvalidInputError(
            "target_fraction must lie in (0, 1]", {"target_fraction": target_fraction}
        )
    if samples_per_k < 1:
        raise InvalidInputError("samples_per_k must be at least 1")
    bad = [k for k in k_values if not 1 <= k <= n]
    if bad:
        raise InvalidInputError("k outside 1..n_players", {"k": bad, "n_players": n})

    target = target_fraction * game.grand_value()
    rng = np.random.default_rng(seed)
    permutations = [random_permutation(n, rng) for _ in range(samples_per_k)]

    rows = []
    for k in k_values:
        hits = sum(game.value_of(perm[:k].tolist()) >= target for perm in permutations)
        rows.append({"k": k, "probability": hits / samples_per_k, "samples": samples_per_k})
    return pd.DataFrame(rows, columns=["k", "probability", "samples"])


@dataclass(frozen=True)
class PimsOutcome:
    """Result of a batch-wise data purchase."""

    success: bool
    coalition: Coalition
    value: float
    batches_used: int
    accuracy_target: float

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "selected": list(self.coalition.members),
            "n_selected": len(self.coalition),
            "value": self.value,
            "batches_used": self.batches_used,
            "accuracy_target": self.accuracy_target,
        }


def pims_select(
    game: ValuationGame,
    accuracy_target: float,
    batch_size: int,
    max_batches: int,
    seed: int,
) -> PimsOutcome:
    """
    Add disjoint random batches of players until ``v >= accuracy_target``.

    Failure (target not reached within ``max_batches`` or players run out)
    is reported in the outcome, not raised.
    """
    if accuracy_target > 1.0:
        raise InvalidInputError(
            "accuracy_target must be at most 1", {"accuracy_target": accuracy_target}
        )
    if batch_size < 1 or max_batches < 1:
        raise InvalidInputError(
            "batch_size and max_batches must be at least 1",
            {"batch_size": batch_size, "max_batches": max_batches},
        )

    n = game.n_players
    order = random_permutation(n, np.random.default_rng(seed)).tolist()

    selected = make_coalition([], n)
    value = 0.0
    batches = 0
    while batches < max_batches and len(selected) < n:
        for player in order[batches * batch_size : (batches + 1) * batch_size]:
            selected = selected.with_player(player)
        batches += 1
        value = game.evaluate(selected)
        if value >= accuracy_target:
            return PimsOutcome(True, selected, value, batches, accuracy_target)

    logger.info(f"PIMS target {accuracy_target:.3f} not reached after {batches} batches")
    return PimsOutcome(False, selected, value, batches, accuracy_target)
