"""Search for the most profitable manipulation a coalition can make under an axiom's hypothesis."""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .audit import Axiom, ManipulationInstance, precondition
from .game import (
    CoalitionalGame,
    Domain,
    from_dividends,
    is_superadditive,
    submasks,
    unanimity_game,
)
from .rules import Rule, coalition_payoff


class Mode(str, enum.Enum):
    INTERNAL = "internal"
    UNDERREPORT = "underreport"
    STRONG = "strong"

    @property
    def axiom(self) -> Axiom:
        return {Mode.INTERNAL: Axiom.R, Mode.UNDERREPORT: Axiom.W, Mode.STRONG: Axiom.RPLUS}[self]

    @classmethod
    def parse(cls, text: str) -> Mode:
        key = text.strip().lower()
        aliases = {
            "internal-reallocation": cls.INTERNAL,
            "r": cls.INTERNAL,
            "w": cls.UNDERREPORT,
            "strong-reallocation": cls.STRONG,
            "r+": cls.STRONG,
        }
        if key in aliases:
            return aliases[key]
        return cls(key)


@dataclass(frozen=True)
class Budget:
    """Lattice steps are ``k / denominator`` with ``|k| <= radius``."""

    radius: int = 12
    denominator: int = 1
    samples: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.radius < 1 or self.denominator < 1 or self.samples < 1:
            raise ValueError("radius, denominator and samples must be positive")


@dataclass(frozen=True)
class ManipulationQuery:
    rule: Rule
    game: CoalitionalGame
    coalition: int
    mode: Mode
    budget: Budget = Budget()

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if not 0 < self.coalition <= self.game.grand:
            raise ValueError("the manipulating coalition must be a nonempty subset of the players")

    @property
    def domain(self) -> Domain:
        return self.game.domain


@dataclass(frozen=True)
class ManipulationResult:
    best_w: Optional[CoalitionalGame]
    gain: Fraction
    evaluated: int
    rejected: int = 0
    # linear rules under internal reallocation: True when the coalition payoff is provably
    # constant on the whole feasible set (so no lattice can ever show a gain)
    exact_constant: Optional[bool] = None


def _free_sets(game: CoalitionalGame, m: int, mode: Mode) -> list[int]:
    if mode is Mode.INTERNAL:
        return [t for t in submasks(m) if t][::-1]
    if mode is Mode.STRONG:
        return [t for t in range(1, 1 << game.n) if t & m and t & m != m]
    return [m]


def _lattice(query: ManipulationQuery, dims: int) -> Iterator[tuple[int, ...]]:
    """Integer numerator vectors: the whole box when it fits the budget, else corners then random draws."""
    b = query.budget
    L = b.radius
    if dims == 0:
        yield ()
        return
    size = (2 * L + 1) ** dims
    if size <= b.samples:
        yield from itertools.product(range(-L, L + 1), repeat=dims)
        return
    count = 0
    if 2**dims <= b.samples // 2:
        for corner in itertools.product((-L, L), repeat=dims):
            yield corner
            count += 1
    rng = random.Random(f"manipulate/{b.seed}")
    while count < b.samples:
        yield tuple(rng.randint(-L, L) for _ in range(dims))
        count += 1


def _candidates(query: ManipulationQuery) -> Iterator[CoalitionalGame]:
    v, m, mode = query.game, query.coalition, query.mode
    den = query.budget.denominator
    if mode is Mode.UNDERREPORT:
        for k in range(1, query.budget.radius + 1):
            yield v.with_worth(m, v.worths[m] - Fraction(k, den))
        return
    free = _free_sets(v, m, mode)
    if mode is Mode.INTERNAL:
        base = list(v.dividends().dividends)
        # the first free set absorbs the others so the dividend mass inside M is kept
        for vec in _lattice(query, len(free) - 1):
            if not any(vec):
                continue
            d = list(base)
            steps = [Fraction(k, den) for k in vec]
            d[free[0]] -= sum(steps)
            for t, s in zip(free[1:], steps):
                d[t] += s
            yield from_dividends(d, v.n)
        return
    for vec in _lattice(query, len(free)):
        if not any(vec):
            continue
        worths = list(v.worths)
        for t, k in zip(free, vec):
            worths[t] += Fraction(k, den)
        yield CoalitionalGame(v.n, tuple(worths))


def linear_payoff_is_constant(rule: Rule, n: int, m: int) -> bool:
    """For a linear rule: does moving dividend mass among subsets of ``m`` leave ``m``'s payoff fixed?"""
    if not rule.is_linear:
        raise ValueError(f"{rule.name} is not linear")
    shares = {coalition_payoff(rule(unanimity_game(t, n)), m) for t in submasks(m) if t}
    return len(shares) <= 1


def optimize(query: ManipulationQuery) -> ManipulationResult:
    """Best lattice manipulation; ties keep the first candidate in enumeration order."""
    rule, v, m, mode = query.rule, query.game, query.coalition, query.mode
    base = coalition_payoff(rule(v), m)
    superadditive = query.domain is Domain.SUPERADDITIVE
    exact = None
    if mode is Mode.INTERNAL and rule.is_linear:
        exact = linear_payoff_is_constant(rule, v.n, m)
    best_w, best_gain = None, Fraction(0)
    evaluated = rejected = 0
    if not (mode is Mode.INTERNAL and bin(m).count("1") == 1):
        for w in _candidates(query):
            if superadditive:
                if not is_superadditive(w):
                    rejected += 1
                    continue
                w = w.with_domain(Domain.SUPERADDITIVE)
            evaluated += 1
            gain = coalition_payoff(rule(w), m) - base
            if gain > best_gain:
                best_w, best_gain = w, gain
    if best_w is not None:
        inst = ManipulationInstance(v, best_w, coalition=m)
        if not precondition(mode.axiom, inst):
            raise AssertionError("witness escaped the feasible set")
    if exact and best_gain != 0:
        raise AssertionError("linear rule gained under a payoff-preserving reallocation")
    return ManipulationResult(best_w, best_gain, evaluated, rejected, exact)


@dataclass(frozen=True)
class ManipulationDiff:
    changed_worths: tuple[tuple[int, Fraction, Fraction], ...]
    changed_dividends: tuple[tuple[int, Fraction, Fraction], ...]
    payoffs: tuple[tuple[int, Fraction, Fraction], ...] = ()
    protected_changes: tuple[int, ...] = field(default=())

    @property
    def empty(self) -> bool:
        return not self.changed_worths


def protected_sets(n: int, m: int, mode: Mode) -> list[int]:
    """Coalitions a manipulation in ``mode`` may not touch."""
    if Mode(mode) is Mode.UNDERREPORT:
        return [t for t in range(1, 1 << n) if t != m]
    return [t for t in range(1, 1 << n) if t & m == 0 or t & m == m]


def explain(
    original: CoalitionalGame,
    manipulated: CoalitionalGame,
    coalition: int,
    mode: Mode,
    rule: Optional[Rule] = None,
) -> ManipulationDiff:
    """Changed worths and dividends, payoff changes of the coalition's members, and any protected coalition touched."""
    n = original.n
    worths = tuple(
        (t, a, b) for t, (a, b) in enumerate(zip(original.worths, manipulated.worths)) if a != b
    )
    dv, dw = original.dividends().dividends, manipulated.dividends().dividends
    divs = tuple((t, a, b) for t, (a, b) in enumerate(zip(dv, dw)) if a != b)
    payoffs: tuple = ()
    if rule is not None:
        before, after = rule(original), rule(manipulated)
        payoffs = tuple((i, before[i], after[i]) for i in range(n) if coalition >> i & 1)
    changed = {t for t, _, _ in worths}
    protected = tuple(t for t in protected_sets(n, coalition, mode) if t in changed)
    return ManipulationDiff(worths, divs, payoffs, protected)
