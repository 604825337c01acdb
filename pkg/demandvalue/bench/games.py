"""
Synthetic coalition games with known structure.

These are cheap stand-ins for forecasting games: axiom and estimator tests
run on them in milliseconds, and the saturating family reproduces the strong
dependence of a player's marginal on coalition size.
"""

from collections.abc import Mapping, Sequence

import numpy as np

from demandvalue.core.coalition import Coalition
from demandvalue.core.game import ValuationGame
from demandvalue.errors import InvalidInputError


def _mask(coalition: Coalition) -> int:
    mask = 0
    for member in coalition.members:
        mask |= 1 << member
    return mask


class TableGame(ValuationGame):
    """Explicit characteristic function indexed by coalition bitmask."""

    def __init__(self, values: Sequence[float], **kwargs):
        table = np.asarray(values, dtype=np.float64)
        n = int(len(table)).bit_length() - 1
        if n < 1 or len(table) != 1 << n:
            raise InvalidInputError(
                "Table length must be 2^n for n >= 1", {"length": len(table)}
            )
        if table[0] != 0.0:
            raise InvalidInputError("v(empty) must be 0")
        super().__init__(n, **kwargs)
        self.table = table

    @classmethod
    def from_mapping(
        cls, n_players: int, values: Mapping[tuple[int, ...], float], **kwargs
    ) -> "TableGame":
        """Build from ``{members: value}``; unlisted coalitions are worth 0."""
        table = np.zeros(1 << n_players)
        for members, value in values.items():
            mask = 0
            for member in members:
                if not 0 <= member < n_players:
                    raise InvalidInputError(
                        "Coalition member out of range",
                        {"members": members, "n_players": n_players},
                    )
                mask |= 1 << member
            table[mask] = value
        return cls(table, **kwargs)

    def _value(self, coalition: Coalition) -> float:
        return float(self.table[_mask(coalition)])


class AdditiveGame(ValuationGame):
    """v(K) = sum of member weights."""

    def __init__(self, weights: Sequence[float], **kwargs):
        self.weights = np.asarray(weights, dtype=np.float64)
        super().__init__(len(self.weights), **kwargs)

    def _value(self, coalition: Coalition) -> float:
        return float(self.weights[list(coalition.members)].sum())


class UnanimityGame(ValuationGame):
    """v(K) = 1 when K contains every carrier player, else 0."""

    def __init__(self, n_players: int, carrier: Sequence[int], **kwargs):
        super().__init__(n_players, **kwargs)
        self.carrier = frozenset(self.coalition(carrier).members)
        if not self.carrier:
            raise InvalidInputError("Carrier must not be empty")

    def _value(self, coalition: Coalition) -> float:
        return 1.0 if self.carrier.issubset(coalition.members) else 0.0


class ComplementaryPairGame(UnanimityGame):
    """Two players worthless alone and worth 1 together; others are dummies."""

    def __init__(self, n_players: int = 2, pair: tuple[int, int] = (0, 1), **kwargs):
        if pair[0] == pair[1]:
            raise InvalidInputError("Pair needs two distinct players")
        super().__init__(n_players, pair, **kwargs)


class SaturatingGame(ValuationGame):
    """
    v(K) = v_max * (1 - prod over heavy members of (1 - beta_i)).

    Each heavy player's ``beta_i`` is ``beta * (1 + noise * u_i)`` with
    ``u_i`` uniform on [-1, 1], fixed by ``seed``. Players outside ``heavy``
    are dummies.
    """

    def __init__(
        self,
        n_players: int,
        heavy: Sequence[int] | None = None,
        beta: float = 0.5,
        noise: float = 0.3,
        v_max: float = 1.0,
        seed: int = 0,
        **kwargs,
    ):
        super().__init__(n_players, **kwargs)
        if not 0.0 < beta < 1.0:
            raise InvalidInputError("beta must lie in (0, 1)", {"beta": beta})
        if noise < 0:
            raise InvalidInputError("noise must be non-negative", {"noise": noise})
        heavy_members = range(n_players) if heavy is None else heavy
        self.heavy = frozenset(self.coalition(heavy_members).members)
        self.v_max = v_max

        rng = np.random.default_rng(seed)
        jitter = rng.uniform(-1.0, 1.0, size=n_players)
        betas = np.clip(beta * (1.0 + noise * jitter), 0.0, 1.0)
        mask = np.zeros(n_players, dtype=bool)
        mask[list(self.heavy)] = True
        self.betas = np.where(mask, betas, 0.0)

    def _value(self, coalition: Coalition) -> float:
        members = list(coalition.members)
        remaining = np.prod(1.0 - self.betas[members])
        return float(self.v_max * (1.0 - remaining))


class DetrimentalMixGame(ValuationGame):
    """
    v(K) = volume-weighted share of on-target demand in K's aggregate.

    A player whose own ``fit`` is below the coalition's current share drags
    the value down, so marginals can be negative.
    """

    def __init__(self, volumes: Sequence[float], fit: Sequence[float], **kwargs):
        self.volumes = np.asarray(volumes, dtype=np.float64)
        self.fit = np.asarray(fit, dtype=np.float64)
        if self.volumes.shape != self.fit.shape:
            raise InvalidInputError("volumes and fit must have the same length")
        if np.any(self.volumes <= 0):
            raise InvalidInputError("volumes must be positive")
        if np.any((self.fit < 0) | (self.fit > 1)):
            raise InvalidInputError("fit must lie in [0, 1]")
        super().__init__(len(self.volumes), **kwargs)

    def _value(self, coalition: Coalition) -> float:
        members = list(coalition.members)
        volume = self.volumes[members]
        return float(np.dot(volume, self.fit[members]) / volume.sum())


def random_game(n_players: int, seed: int, monotone: bool = False, **kwargs) -> TableGame:
    """
    Seeded random game with ``v(empty) = 0``.

    Non-monotone games draw every coalition value uniformly from [-1, 1].
    Monotone games sum non-negative random dividends over sub-coalitions and
    are scaled so that ``v(N) = 1``.
    """
    if n_players < 1:
        raise InvalidInputError("A game needs at least one player")
    rng = np.random.default_rng(seed)
    size = 1 << n_players

    if not monotone:
        values = rng.uniform(-1.0, 1.0, size=size)
        values[0] = 0.0
        return TableGame(values, **kwargs)

    dividends = rng.exponential(1.0, size=size) * (rng.random(size) < 0.5)
    dividends[0] = 0.0
    masks = np.arange(size)
    values = dividends.copy()
    for i in range(n_players):
        bit = 1 << i
        has_bit = (masks & bit) != 0
        values[has_bit] += values[masks[has_bit] ^ bit]
    if values[-1] <= 0:
        values[masks != 0] += 1.0
    return TableGame(values / values[-1], **kwargs)
