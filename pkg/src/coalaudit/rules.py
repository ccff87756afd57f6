"""Allocation rules: total maps from games to payoff vectors, in exact arithmetic."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .game import CoalitionalGame, Coalition, as_fraction, members, popcount, submasks

Allocation = tuple[Fraction, ...]


def coalition_payoff(alloc: Sequence[Fraction], mask: Coalition) -> Fraction:
    return sum((alloc[i] for i in members(mask)), Fraction(0))


def shapley(v: CoalitionalGame) -> Allocation:
    """Each dividend split equally among the members of its coalition."""
    d = v.dividends().dividends
    pay = [Fraction(0)] * v.n
    for mask in range(1, 1 << v.n):
        if d[mask] == 0:
            continue
        share = d[mask] / popcount(mask)
        for i in members(mask):
            pay[i] += share
    return tuple(pay)


def shapley_by_marginals(v: CoalitionalGame) -> Allocation:
    """Weighted average of marginal contributions, weights ``|S|!(n-|S|-1)!/n!``."""
    n = v.n
    fact = [math.factorial(k) for k in range(n + 1)]
    weight = [Fraction(fact[s] * fact[n - s - 1], fact[n]) for s in range(n)]
    pay = []
    for i in range(n):
        bit = 1 << i
        total = Fraction(0)
        for s in submasks(v.grand & ~bit):
            total += weight[popcount(s)] * (v.worths[s | bit] - v.worths[s])
        pay.append(total)
    return tuple(pay)


def equal_division(v: CoalitionalGame) -> Allocation:
    share = v.worths[v.grand] / v.n
    return (share,) * v.n


def weighted_shapley(v: CoalitionalGame, weights: Sequence) -> Allocation:
    """Split each dividend among its coalition in proportion to positive player weights."""
    weights = [as_fraction(w) for w in weights]
    if len(weights) != v.n:
        raise ValueError(f"need {v.n} weights, got {len(weights)}")
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be strictly positive")
    d = v.dividends().dividends
    pay = [Fraction(0)] * v.n
    for mask in range(1, 1 << v.n):
        if d[mask] == 0:
            continue
        ms = members(mask)
        total = sum(weights[i] for i in ms)
        for i in ms:
            pay[i] += d[mask] * weights[i] / total
    return tuple(pay)


def shapley_ed_mixture(v: CoalitionalGame, alpha) -> Allocation:
    """``alpha * Sh + (1 - alpha) * ED`` for any rational ``alpha``."""
    alpha = as_fraction(alpha)
    sh = shapley(v)
    ed = v.worths[v.grand] / v.n
    return tuple(alpha * s + (1 - alpha) * ed for s in sh)


def egalitarian_shapley(v: CoalitionalGame, alpha) -> Allocation:
    alpha = as_fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    return shapley_ed_mixture(v, alpha)


def null_value(v: CoalitionalGame) -> Allocation:
    return (Fraction(0),) * v.n


def phi_two_player(v: CoalitionalGame) -> Allocation:
    if v.n != 2:
        raise ValueError(f"phi2 is only defined for two players, got {v.n}")
    vi, vj, vij = v.worths[1], v.worths[2], v.worths[3]
    if vi == vj:
        first = vij / 2
    elif vi > vj:
        first = max(vi, vij - vj)
    else:
        first = min(vi, vij - vj)
    return (first, vij - first)


def phi_w(v: CoalitionalGame) -> Allocation:
    """Shapley rescaled after removing the grand coalition's dividend, when that is defined."""
    d_grand = v.dividends().dividends[v.grand]
    vn = v.worths[v.grand]
    sh = shapley(v)
    if d_grand > 0 and vn - d_grand > 0:
        factor = vn / (vn - d_grand)
        return tuple((s - d_grand / v.n) * factor for s in sh)
    return sh


def nucleolus(v: CoalitionalGame) -> Allocation:
    """Prenucleolus: no individual-rationality bounds, so it is defined for every game."""
    return _nucleolus_cached(v.n, v.worths)


@lru_cache(maxsize=4096)
def _nucleolus_cached(n: int, worths: tuple[Fraction, ...]) -> Allocation:
    from .nucleolus import prenucleolus

    return prenucleolus(CoalitionalGame(n, worths))


class RuleKind(str, enum.Enum):
    SHAPLEY = "shapley"
    EQUAL_DIVISION = "equal-division"
    WEIGHTED_SHAPLEY = "weighted-shapley"
    EGALITARIAN_SHAPLEY = "egalitarian-shapley"
    SHAPLEY_ED_MIXTURE = "shapley-ed-mixture"
    NUCLEOLUS = "nucleolus"
    NULL_VALUE = "null-value"
    PHI_TWO_PLAYER = "phi2"
    PHI_W = "phi-w"


_ALIASES = {
    "sh": RuleKind.SHAPLEY,
    "ed": RuleKind.EQUAL_DIVISION,
    "weighted": RuleKind.WEIGHTED_SHAPLEY,
    "egalitarian": RuleKind.EGALITARIAN_SHAPLEY,
    "mixture": RuleKind.SHAPLEY_ED_MIXTURE,
    "null": RuleKind.NULL_VALUE,
    "prenucleolus": RuleKind.NUCLEOLUS,
    "phiw": RuleKind.PHI_W,
}

def parse_kind(head: str) -> RuleKind:
    head = head.strip().lower()
    try:
        return _ALIASES.get(head) or RuleKind(head)
    except ValueError:
        known = ", ".join(k.value for k in RuleKind)
        raise ValueError(f"unknown rule {head!r} (known: {known})") from None


LINEAR_KINDS = frozenset(
    {
        RuleKind.SHAPLEY,
        RuleKind.EQUAL_DIVISION,
        RuleKind.WEIGHTED_SHAPLEY,
        RuleKind.EGALITARIAN_SHAPLEY,
        RuleKind.SHAPLEY_ED_MIXTURE,
        RuleKind.NULL_VALUE,
    }
)


@dataclass(frozen=True)
class Rule:
    """A named allocation rule together with its parameters.

    ``weights`` belongs to the weighted Shapley value; when omitted it defaults to
    ``1, 2, ..., n`` for whatever ``n`` the rule is applied to. ``alpha`` is the
    Shapley share of an egalitarian Shapley value or of an unrestricted mixture.
    """

    kind: RuleKind
    weights: Optional[tuple[Fraction, ...]] = None
    alpha: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", RuleKind(self.kind))
        if self.weights is not None:
            ws = tuple(as_fraction(w) for w in self.weights)
            if any(w <= 0 for w in ws):
                raise ValueError("weights must be strictly positive")
            object.__setattr__(self, "weights", ws)
        if self.alpha is not None:
            object.__setattr__(self, "alpha", as_fraction(self.alpha))
        if self.kind in (RuleKind.EGALITARIAN_SHAPLEY, RuleKind.SHAPLEY_ED_MIXTURE):
            if self.alpha is None:
                raise ValueError(f"{self.kind.value} needs alpha")
            if self.kind is RuleKind.EGALITARIAN_SHAPLEY and not 0 <= self.alpha <= 1:
                raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")

    def __call__(self, v: CoalitionalGame) -> Allocation:
        k = self.kind
        if k is RuleKind.SHAPLEY:
            return shapley(v)
        if k is RuleKind.EQUAL_DIVISION:
            return equal_division(v)
        if k is RuleKind.WEIGHTED_SHAPLEY:
            return weighted_shapley(v, self.weights_for(v.n))
        if k is RuleKind.EGALITARIAN_SHAPLEY:
            return egalitarian_shapley(v, self.alpha)
        if k is RuleKind.SHAPLEY_ED_MIXTURE:
            return shapley_ed_mixture(v, self.alpha)
        if k is RuleKind.NUCLEOLUS:
            return nucleolus(v)
        if k is RuleKind.NULL_VALUE:
            return null_value(v)
        if k is RuleKind.PHI_TWO_PLAYER:
            return phi_two_player(v)
        return phi_w(v)

    def weights_for(self, n: int) -> tuple[Fraction, ...]:
        if self.weights is None:
            return tuple(Fraction(i + 1) for i in range(n))
        if len(self.weights) != n:
            raise ValueError(f"rule has {len(self.weights)} weights but the game has {n} players")
        return self.weights

    @property
    def is_linear(self) -> bool:
        return self.kind in LINEAR_KINDS

    @property
    def name(self) -> str:
        if self.weights is not None:
            return f"{self.kind.value}:{','.join(str(w) for w in self.weights)}"
        if self.alpha is not None:
            return f"{self.kind.value}:{self.alpha}"
        return self.kind.value

    def __str__(self) -> str:
        return self.name

    @classmethod
    def parse(cls, text: str) -> Rule:
        """Parse ``kind[:params]``, e.g. ``shapley``, ``weighted-shapley:1,2,1``, ``egalitarian:1/2``."""
        head, _, params = text.strip().partition(":")
        kind = parse_kind(head)
        if kind is RuleKind.WEIGHTED_SHAPLEY:
            weights = tuple(Fraction(p) for p in params.split(",")) if params else None
            return cls(kind, weights=weights)
        if kind in (RuleKind.EGALITARIAN_SHAPLEY, RuleKind.SHAPLEY_ED_MIXTURE):
            if not params:
                raise ValueError(f"{kind.value} needs a parameter, e.g. {kind.value}:1/2")
            return cls(kind, alpha=Fraction(params))
        if params:
            raise ValueError(f"rule {kind.value} takes no parameters")
        return cls(kind)


SHAPLEY = Rule(RuleKind.SHAPLEY)
EQUAL_DIVISION = Rule(RuleKind.EQUAL_DIVISION)
NUCLEOLUS = Rule(RuleKind.NUCLEOLUS)
NULL_VALUE = Rule(RuleKind.NULL_VALUE)
PHI_TWO_PLAYER = Rule(RuleKind.PHI_TWO_PLAYER)
PHI_W = Rule(RuleKind.PHI_W)
