"""Coalitions of data sources with a canonical, hashable key."""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np

from demandvalue.errors import CoalitionRangeError, InvalidInputError

# Player sets up to this size are keyed by an integer bitset
BITSET_LIMIT = 64

CoalitionKey = int | bytes


def encode_key(members: tuple[int, ...], n_players: int) -> CoalitionKey:
    """Bitset for small player sets, little-endian uint32 index bytes beyond."""
    if n_players <= BITSET_LIMIT:
        key = 0
        for member in members:
            key |= 1 << member
        return key
    return np.asarray(members, dtype="<u4").tobytes()


def decode_key(key: CoalitionKey) -> tuple[int, ...]:
    """Inverse of :func:`encode_key`."""
    if isinstance(key, int):
        return tuple(i for i in range(key.bit_length()) if key >> i & 1)
    return tuple(int(i) for i in np.frombuffer(key, dtype="<u4"))


@dataclass(frozen=True)
class Coalition:
    """Sorted, duplicate-free member set of a player universe of size ``n_players``."""

    members: tuple[int, ...]
    n_players: int
    key: CoalitionKey

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, player: object) -> bool:
        return player in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    @property
    def is_empty(self) -> bool:
        return not self.members

    @property
    def label(self) -> str:
        """Short printable form, e.g. ``{0,2}``."""
        return "{" + ",".join(str(m) for m in self.members) + "}"

    @classmethod
    def from_mask(cls, mask: int, n_players: int) -> "Coalition":
        """Coalition from an integer bitmask (any ``n_players``)."""
        members = tuple(i for i in range(mask.bit_length()) if mask >> i & 1)
        if members and members[-1] >= n_players:
            raise CoalitionRangeError(
                "Bitmask addresses a player outside the game",
                {"mask": mask, "n_players": n_players},
            )
        return cls(members, n_players, encode_key(members, n_players))

    def with_player(self, player: int) -> "Coalition":
        return make_coalition([*self.members, player], self.n_players)

    def without_player(self, player: int) -> "Coalition":
        return make_coalition([m for m in self.members if m != player], self.n_players)


def make_coalition(members: Iterable[int], n_players: int) -> Coalition:
    """Canonical coalition from any iterable of indices; duplicates are dropped.

    Raises:
        CoalitionRangeError: If an index is outside ``[0, n_players)``
    """
    if n_players < 0:
        raise InvalidInputError("Player count must be non-negative")
    unique = sorted({int(m) for m in members})
    if unique and (unique[0] < 0 or unique[-1] >= n_players):
        raise CoalitionRangeError(
            "Coalition member out of range",
            {"members": unique, "n_players": n_players},
        )
    canonical = tuple(unique)
    return Coalition(canonical, n_players, encode_key(canonical, n_players))


def grand_coalition(n_players: int) -> Coalition:
    return make_coalition(range(n_players), n_players)


def empty_coalition(n_players: int) -> Coalition:
    return make_coalition((), n_players)
