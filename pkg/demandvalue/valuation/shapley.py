"""
Exact Shapley values, leave-one-out values and volume shares.

Exact Shapley enumerates all ``2^n`` coalitions once, stores their values by
bitmask and sums weighted marginal differences in bitmask order, so the
result does not depend on how many workers evaluated the coalitions.
"""

import time
from math import comb

import numpy as np
from joblib import Parallel, delayed

from demandvalue.config import get_settings
from demandvalue.core.coalition import Coalition, make_coalition
from demandvalue.core.game import ValuationGame
from demandvalue.core.series import DemandPanel, FloatArray
from demandvalue.errors import InfeasibleError, InvalidInputError
from demandvalue.infra.logging import get_logger, log_with_context

logger = get_logger(__name__)


def shapley_weights(n_players: int) -> FloatArray:
    """``|K|! (n - |K| - 1)! / n!`` for ``|K| = 0 .. n-1``."""
    return np.array(
        [1.0 / (n_players * comb(n_players - 1, k)) for k in range(n_players)]
    )


def coalition_values(game: ValuationGame, workers: int = 1) -> FloatArray:
    """Value of every coalition indexed by bitmask; entry 0 is ``v(empty)``."""
    n = game.n_players
    masks = range(1, 1 << n)

    def value(mask: int) -> float:
        return game.evaluate(Coalition.from_mask(mask, n))

    if workers > 1:
        computed = Parallel(n_jobs=workers, backend="threading")(
            delayed(value)(mask) for mask in masks
        )
    else:
        computed = [value(mask) for mask in masks]

    values = np.empty(1 << n)
    values[0] = 0.0
    values[1:] = computed
    return values


def exact_shapley(
    game: ValuationGame,
    exact_limit: int | None = None,
    workers: int = 1,
) -> FloatArray:
    """
    Shapley value of every player by subset enumeration.

    Args:
        game: Game to value
        exact_limit: Largest player count accepted (defaults to settings)
        workers: Threads evaluating coalitions

    Returns:
        phi with one entry per player

    Raises:
        InfeasibleError: More players than ``exact_limit``
    """
    n = game.n_players
    limit = exact_limit if exact_limit is not None else get_settings().exact_limit
    if n > limit:
        raise InfeasibleError(
            f"Exact Shapley over {n} players needs 2^{n} evaluations; "
            "use an approximation (mc, rs, ss) or raise the exact limit",
            {"n_players": n, "exact_limit": limit},
        )

    started = time.perf_counter()
    values = coalition_values(game, workers=workers)

    masks = np.arange(1 << n, dtype=np.int64)
    sizes = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        sizes += (masks >> i) & 1
    weights = shapley_weights(n)

    phi = np.empty(n)
    for i in range(n):
        bit = 1 << i
        without = masks[(masks & bit) == 0]
        marginals = values[without | bit] - values[without]
        phi[i] = np.sum(weights[sizes[without]] * marginals)

    log_with_context(
        logger,
        "info",
        f"Exact Shapley over {n} players done",
        algorithm="exact",
        tte=len(masks) - 1,
        evaluations=game.cache_size,
        elapsed_ms=round((time.perf_counter() - started) * 1000, 1),
    )
    return phi


def leave_one_out(game: ValuationGame) -> FloatArray:
    """``v(N) - v(N without i)`` for every player; may be negative."""
    n = game.n_players
    v_full = game.grand_value()
    grand = make_coalition(range(n), n)
    return np.array([v_full - game.evaluate(grand.without_player(i)) for i in range(n)])


def volume_shares(panel: DemandPanel) -> FloatArray:
    """Each source's share of all rides in the panel.

    Raises:
        InvalidInputError: If the panel has no rides
    """
    totals = panel.totals()
    grand = totals.sum()
    if grand <= 0:
        raise InvalidInputError("Panel has no rides", {"zone": panel.zone})
    return totals / grand
