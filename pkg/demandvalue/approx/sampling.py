"""
Permutation plans for Shapley sampling.

Random sampling draws independent uniform permutations. Structured sampling
expands a shuffled player order through a cyclic Latin square so every player
takes every position exactly once per round.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal, TypeVar

import numpy as np
from numpy.typing import NDArray

from demandvalue.errors import InvalidInputError

T = TypeVar("T")

IntArray = NDArray[np.int64]
SeedLike = int | np.random.SeedSequence | None
Provenance = Literal["mc", "rs", "ss"]


def build_latin_square(n: int) -> IntArray:
    """Cyclic Latin square ``LS[i][j] = (i + j) mod n``."""
    if n < 1:
        raise InvalidInputError("Latin square needs at least one symbol", {"n": n})
    index = np.arange(n, dtype=np.int64)
    return (index[:, None] + index[None, :]) % n


def fisher_yates_shuffle(items: Sequence[T], rng: np.random.Generator) -> list[T]:
    """Shuffled copy of ``items``, swapping from the last index down."""
    result = list(items)
    for i in range(len(result) - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        result[i], result[j] = result[j], result[i]
    return result


def random_permutation(n: int, rng: np.random.Generator) -> IntArray:
    return np.array(fisher_yates_shuffle(range(n), rng), dtype=np.int64)


@dataclass(frozen=True)
class SamplePlan:
    """Ordered permutations of ``range(n_players)`` and how they were drawn."""

    permutations: IntArray
    provenance: Provenance
    rounds: int
    seed: int | None

    def __post_init__(self) -> None:
        perms = np.array(self.permutations, dtype=np.int64, ndmin=2)
        perms.setflags(write=False)
        object.__setattr__(self, "permutations", perms)

    def __len__(self) -> int:
        return len(self.permutations)

    @property
    def n_players(self) -> int:
        return self.permutations.shape[1]

    def position_counts(self) -> IntArray:
        """``counts[player, position]`` over the whole plan."""
        n = self.n_players
        counts = np.zeros((n, n), dtype=np.int64)
        positions = np.broadcast_to(np.arange(n), self.permutations.shape)
        np.add.at(counts, (self.permutations, positions), 1)
        return counts


def _check_sizes(n: int, rounds: int) -> None:
    if n < 1:
        raise InvalidInputError("A plan needs at least one player", {"n": n})
    if rounds < 1:
        raise InvalidInputError("A plan needs at least one round", {"rounds": rounds})


def _seed_value(seed: SeedLike) -> int | None:
    if isinstance(seed, np.random.SeedSequence):
        return int(seed.generate_state(1)[0])
    return seed


def ss_plan(n: int, rounds: int, seed: SeedLike) -> SamplePlan:
    """
    Structured sampling plan of ``rounds * n`` permutations.

    Each round shuffles a player order Q and emits permutation ``i`` with
    player ``Q[LS[i][j]]`` at position ``j``.
    """
    _check_sizes(n, rounds)
    rng = np.random.default_rng(seed)
    square = build_latin_square(n)
    blocks = [random_permutation(n, rng)[square] for _ in range(rounds)]
    return SamplePlan(np.vstack(blocks), provenance="ss", rounds=rounds, seed=_seed_value(seed))


def rs_plan(n: int, rounds: int, seed: SeedLike) -> SamplePlan:
    """``rounds * n`` independent uniform permutations."""
    _check_sizes(n, rounds)
    rng = np.random.default_rng(seed)
    perms = [random_permutation(n, rng) for _ in range(rounds * n)]
    return SamplePlan(np.vstack(perms), provenance="rs", rounds=rounds, seed=_seed_value(seed))


PLAN_BUILDERS = {"rs": rs_plan, "ss": ss_plan}
