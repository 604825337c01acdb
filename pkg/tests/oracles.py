"""
Brute-force reference implementations used by the test suites.
"""

from itertools import permutations
from math import factorial

import numpy as np

from demandvalue.approx.sampling import random_permutation
from demandvalue.core.game import ValuationGame


def permutation_shapley(game: ValuationGame) -> np.ndarray:
    """Average marginal contribution over all n! orderings."""
    n = game.n_players
    phi = np.zeros(n)
    for order in permutations(range(n)):
        members: list[int] = []
        previous = 0.0
        for player in order:
            members.append(player)
            current = game.value_of(members)
            phi[player] += current - previous
            previous = current
    return phi / factorial(n)


def dtw_paths(m: int, n: int):
    """Every monotone warping path from (0, 0) to (m - 1, n - 1)."""

    def extend(path):
        i, j = path[-1]
        if (i, j) == (m - 1, n - 1):
            yield path
            return
        for di, dj in ((1, 0), (0, 1), (1, 1)):
            if i + di < m and j + dj < n:
                yield from extend(path + [(i + di, j + dj)])

    yield from extend([(0, 0)])


def brute_force_dtw(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return min(
        sum(abs(a[i] - b[j]) for i, j in path) for path in dtw_paths(len(a), len(b))
    )


def pims_batches(
    game: ValuationGame, accuracy_target: float, batch_size: int, max_batches: int, seed: int
) -> tuple[int, tuple[int, ...]]:
    """Batches bought and players held when a direct batch-by-batch purchase stops."""
    n = game.n_players
    order = random_permutation(n, np.random.default_rng(seed)).tolist()
    chosen: list[int] = []
    for batch in range(1, max_batches + 1):
        chosen = order[: batch * batch_size]
        if game.value_of(chosen) >= accuracy_target or len(chosen) >= n:
            return batch, tuple(sorted(chosen))
    return max_batches, tuple(sorted(chosen))
