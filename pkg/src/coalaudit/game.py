"""Transferable-utility games stored as dense worth tables over coalition bitmasks.

A coalition is a plain ``int`` whose bit ``i`` is set iff player ``i`` belongs
to it. Games are immutable; every operation returns a new object.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Sequence

MAX_PLAYERS = 16

Coalition = int


class Domain(str, enum.Enum):
    UNRESTRICTED = "unrestricted"
    SUPERADDITIVE = "superadditive"


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or string")
    return Fraction(value)


def grand(n: int) -> Coalition:
    return (1 << n) - 1


def popcount(mask: Coalition) -> int:
    return bin(mask).count("1")


def members(mask: Coalition) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def coalition(players: Iterable[int]) -> Coalition:
    mask = 0
    for i in players:
        mask |= 1 << i
    return mask


def submasks(mask: Coalition) -> Iterator[Coalition]:
    """All subsets of ``mask``, including ``mask`` itself and the empty set."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_PLAYERS:
        raise ValueError(f"player count must be in 1..{MAX_PLAYERS}, got {n}")


def _check_mask(mask: Coalition, n: int) -> None:
    if not 0 <= mask < (1 << n):
        raise ValueError(f"coalition bitmask {mask} is out of range for {n} players")


def mobius(values: Sequence[Fraction], n: int) -> list[Fraction]:
    """In-place subset-sum Moebius transform, O(n 2^n)."""
    out = list(values)
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if mask & bit:
                out[mask] -= out[mask ^ bit]
    return out


def zeta(values: Sequence[Fraction], n: int) -> list[Fraction]:
    """Inverse of :func:`mobius`: sums over all subsets."""
    out = list(values)
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if mask & bit:
                out[mask] += out[mask ^ bit]
    return out


@dataclass(frozen=True)
class DividendVector:
    """Harsanyi dividends indexed by coalition bitmask."""

    n: int
    dividends: tuple[Fraction, ...]

    def __post_init__(self):
        _check_n(self.n)
        if len(self.dividends) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} dividends, got {len(self.dividends)}")
        object.__setattr__(self, "dividends", tuple(as_fraction(d) for d in self.dividends))

    def __getitem__(self, mask: Coalition) -> Fraction:
        return self.dividends[mask]

    def support(self) -> list[Coalition]:
        return [mask for mask, d in enumerate(self.dividends) if d != 0]


@dataclass(frozen=True)
class CoalitionalGame:
    """A game ``v`` on players ``0..n-1`` with ``worths[mask] = v(S)``."""

    n: int
    worths: tuple[Fraction, ...]
    domain: Domain = Domain.UNRESTRICTED

    def __post_init__(self):
        _check_n(self.n)
        if len(self.worths) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} worths, got {len(self.worths)}")
        worths = tuple(as_fraction(w) for w in self.worths)
        if worths[0] != 0:
            raise ValueError("the empty coalition must have worth 0")
        object.__setattr__(self, "worths", worths)
        object.__setattr__(self, "domain", Domain(self.domain))
        if self.domain is Domain.SUPERADDITIVE:
            witness = superadditivity_witness(self)
            if witness is not None:
                raise ValueError(
                    f"game tagged superadditive violates superadditivity at {witness}"
                )

    @property
    def grand(self) -> Coalition:
        return grand(self.n)

    def __getitem__(self, mask: Coalition) -> Fraction:
        return self.worths[mask]

    def worth(self, mask: Coalition) -> Fraction:
        _check_mask(mask, self.n)
        return self.worths[mask]

    def marginal_contribution(self, i: int, mask: Coalition) -> Fraction:
        _check_mask(mask, self.n)
        if not 0 <= i < self.n:
            raise ValueError(f"player {i} out of range")
        if mask >> i & 1:
            raise ValueError(f"player {i} already belongs to coalition {mask:#b}")
        return self.worths[mask | 1 << i] - self.worths[mask]

    def dividends(self) -> DividendVector:
        return DividendVector(self.n, tuple(mobius(self.worths, self.n)))

    def with_domain(self, domain: Domain | str) -> CoalitionalGame:
        return CoalitionalGame(self.n, self.worths, Domain(domain))

    def with_worth(self, mask: Coalition, value) -> CoalitionalGame:
        """Copy with a single worth overwritten (domain reset to unrestricted)."""
        _check_mask(mask, self.n)
        worths = list(self.worths)
        worths[mask] = as_fraction(value)
        return CoalitionalGame(self.n, tuple(worths))

    def __add__(self, other: CoalitionalGame) -> CoalitionalGame:
        if not isinstance(other, CoalitionalGame):
            return NotImplemented
        _same_n(self, other)
        return CoalitionalGame(self.n, tuple(a + b for a, b in zip(self.worths, other.worths)))

    def __sub__(self, other: CoalitionalGame) -> CoalitionalGame:
        if not isinstance(other, CoalitionalGame):
            return NotImplemented
        _same_n(self, other)
        return CoalitionalGame(self.n, tuple(a - b for a, b in zip(self.worths, other.worths)))

    def scale(self, factor) -> CoalitionalGame:
        factor = as_fraction(factor)
        return CoalitionalGame(self.n, tuple(factor * w for w in self.worths))


def _same_n(v: CoalitionalGame, w: CoalitionalGame) -> None:
    if v.n != w.n:
        raise ValueError(f"games have different player counts ({v.n} vs {w.n})")


def game(n: int, worths: Sequence, domain: Domain | str = Domain.UNRESTRICTED) -> CoalitionalGame:
    return CoalitionalGame(n, tuple(as_fraction(w) for w in worths), Domain(domain))


def game_from_function(n: int, fn: Callable[[Coalition], object]) -> CoalitionalGame:
    _check_n(n)
    return CoalitionalGame(n, tuple([Fraction(0)] + [as_fraction(fn(m)) for m in range(1, 1 << n)]))


def null_game(n: int) -> CoalitionalGame:
    _check_n(n)
    return CoalitionalGame(n, (Fraction(0),) * (1 << n))


def unanimity_game(t: Coalition, n: int) -> CoalitionalGame:
    _check_n(n)
    _check_mask(t, n)
    if t == 0:
        raise ValueError("the unanimity game of the empty coalition is not a game")
    return CoalitionalGame(
        n, tuple(Fraction(1) if mask & t == t else Fraction(0) for mask in range(1 << n))
    )


def modular_game(x: Sequence) -> CoalitionalGame:
    return add_modular(null_game(len(x)), x)


def from_dividends(d: DividendVector | Sequence, n: Optional[int] = None) -> CoalitionalGame:
    if not isinstance(d, DividendVector):
        if n is None:
            n = (len(d) - 1).bit_length()
        d = DividendVector(n, tuple(d))
    if d.dividends[0] != 0:
        raise ValueError("the dividend of the empty coalition must be 0")
    return CoalitionalGame(d.n, tuple(zeta(d.dividends, d.n)))


def add_modular(v: CoalitionalGame, x: Sequence) -> CoalitionalGame:
    """``(v + x)(S) = v(S) + sum_{i in S} x_i``; the domain tag is kept."""
    if len(x) != v.n:
        raise ValueError(f"shift has length {len(x)}, game has {v.n} players")
    x = [as_fraction(xi) for xi in x]
    shift = [Fraction(0)] * (1 << v.n)
    for i, xi in enumerate(x):
        shift[1 << i] = xi
    shift = zeta(shift, v.n)
    shifted = tuple(a + b for a, b in zip(v.worths, shift))
    return CoalitionalGame(v.n, shifted, v.domain)


def superadditivity_witness(v: CoalitionalGame) -> Optional[tuple[Coalition, Coalition]]:
    """A disjoint pair ``(S, T)`` with ``v(S | T) < v(S) + v(T)``, or ``None``."""
    w = v.worths
    for union in range(1, 1 << v.n):
        wu = w[union]
        # each unordered split {S, T} of the union is visited once: S holds the lowest bit
        low = union & -union
        rest = union ^ low
        for sub in submasks(rest):
            s = sub | low
            t = union ^ s
            if t and wu < w[s] + w[t]:
                return (s, t)
    return None


def is_superadditive(v: CoalitionalGame) -> bool:
    return superadditivity_witness(v) is None


def are_symmetric(v: CoalitionalGame, i: int, j: int) -> bool:
    if i == j:
        raise ValueError("symmetry is defined for two distinct players")
    bi, bj = 1 << i, 1 << j
    rest = v.grand & ~(bi | bj)
    return all(v.worths[s | bi] == v.worths[s | bj] for s in submasks(rest))


def is_null_player(v: CoalitionalGame, i: int) -> bool:
    bi = 1 << i
    rest = v.grand & ~bi
    return all(v.worths[s | bi] == v.worths[s] for s in submasks(rest))


def null_players(v: CoalitionalGame) -> list[int]:
    return [i for i in range(v.n) if is_null_player(v, i)]


def symmetric_pairs(v: CoalitionalGame) -> list[tuple[int, int]]:
    return [(i, j) for i in range(v.n) for j in range(i + 1, v.n) if are_symmetric(v, i, j)]


def support_count(v: CoalitionalGame) -> int:
    return len(v.dividends().support())


def required_players(v: CoalitionalGame) -> Coalition:
    """Players in every coalition with a non-zero dividend (all players for the null game)."""
    req = v.grand
    for mask in v.dividends().support():
        req &= mask
    return req
