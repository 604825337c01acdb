"""Coalition-game interface with a thread-safe memo cache and TtE accounting."""

import threading
from abc import ABC, abstractmethod
from collections.abc import Iterable

from demandvalue.core.coalition import Coalition, CoalitionKey, make_coalition
from demandvalue.errors import InvalidInputError
from demandvalue.infra.logging import get_logger, log_with_context

logger = get_logger(__name__)


class ValuationGame(ABC):
    """Characteristic function ``v: coalition -> real`` with memoization.

    ``tte_counter`` counts distinct coalitions whose value was actually
    computed. Concurrent misses on one key may both compute; only the first
    insert is kept and counted. ``v(empty) = 0`` and is never computed.
    """

    def __init__(
        self,
        n_players: int,
        cache_enabled: bool = True,
        progress_every: int | None = None,
    ):
        if n_players < 1:
            raise InvalidInputError("A game needs at least one player")
        self.n_players = n_players
        self.cache_enabled = cache_enabled
        self.progress_every = progress_every
        self._cache: dict[CoalitionKey, float] = {}
        self._lock = threading.Lock()
        self._tte = 0

    @abstractmethod
    def _value(self, coalition: Coalition) -> float:
        """Compute v for a non-empty coalition."""

    @property
    def tte_counter(self) -> int:
        return self._tte

    @property
    def cache_size(self) -> int:
        return len(self._cache)

    def coalition(self, members: Iterable[int]) -> Coalition:
        return make_coalition(members, self.n_players)

    def evaluate(self, coalition: Coalition) -> float:
        """Memoized value of ``coalition``."""
        if coalition.n_players != self.n_players:
            raise InvalidInputError(
                "Coalition belongs to a different game",
                {"n_players": coalition.n_players, "game_players": self.n_players},
            )
        if coalition.is_empty:
            return 0.0

        key = coalition.key
        if self.cache_enabled:
            with self._lock:
                cached = self._cache.get(key)
            if cached is not None:
                return cached

        value = float(self._value(coalition))

        with self._lock:
            if self.cache_enabled:
                existing = self._cache.get(key)
                if existing is not None:
                    return existing
                self._cache[key] = value
            self._tte += 1
            count = self._tte

        if self.progress_every and count % self.progress_every == 0:
            log_with_context(
                logger,
                "info",
                f"Evaluated {count} coalitions",
                evaluations=count,
            )
        return value

    def value_of(self, members: Iterable[int]) -> float:
        """Convenience: ``evaluate`` on raw member indices."""
        return self.evaluate(self.coalition(members))

    def grand_value(self) -> float:
        return self.value_of(range(self.n_players))
