"""Which axioms each rule is known to satisfy (True), to fail (False), or neither (None).

The S/N/E/W/R/CMarg columns restate the published independence examples for
the rival rules. The other cells are filled only where the answer follows from
a standard argument: linearity, the random-order form of weighted Shapley
values, the equal-division characterisation under R+, or an implication
between axioms (an R failure is an R+ failure; for efficient rules a W failure
is also a CMono, M+ and M- failure, and a CMarg failure is an M- failure).
Weighted Shapley under R+ and the nucleolus under CMono are marked failing on
the strength of exact seeded witnesses (the latter appear from four players on).
"""

from __future__ import annotations

from typing import Optional

from .rules import Rule, RuleKind

AXIOMS = ("A", "E", "N", "S", "R+", "R", "W", "CMono", "M+", "M", "CMarg", "M-")


def _row(holds: str, fails: str = "", unknown: str = "") -> dict[str, Optional[bool]]:
    row: dict[str, Optional[bool]] = {}
    for ax in holds.split():
        row[ax] = True
    for ax in fails.split():
        row[ax] = False
    for ax in unknown.split():
        row[ax] = None
    missing = set(AXIOMS) - set(row)
    if missing:
        raise AssertionError(f"expectation row misses {sorted(missing)}")
    return row


TABLE: dict[str, dict[str, Optional[bool]]] = {
    "shapley": _row("A E N S R W CMono M+ M CMarg M-", fails="R+"),
    "equal-division": _row("A E S R+ R W CMono CMarg M-", fails="N M+ M"),
    "weighted-shapley": _row("A E N R W CMono M+ M CMarg M-", fails="S R+"),
    "null-value": _row("A N S R+ R W CMono M+ M CMarg M-", fails="E"),
    "phi-w": _row("E N S R CMarg", fails="A R+ W CMono M+ M M-"),
    "nucleolus": _row("E N S W", fails="A R+ R CMono M+ M CMarg M-"),
    # proper convex mixtures; the endpoints are delegated to shapley / equal-division
    "egalitarian": _row("A E S R W CMono CMarg M-", fails="N R+ M+ M"),
    # alpha > 1 (for example 2 Sh - ED): monotone for coalitions but not weakly monotone
    "over-shapley": _row("A E S R W CMono CMarg", fails="N R+ M+ M M-"),
    # two-player only; every listed axiom holds, the rest are not asserted
    "phi2": _row("E N S R W CMarg", unknown="A R+ CMono M+ M M-"),
}


def row_for(rule: Rule) -> dict[str, Optional[bool]]:
    k = rule.kind
    if k in (RuleKind.EGALITARIAN_SHAPLEY, RuleKind.SHAPLEY_ED_MIXTURE):
        a = rule.alpha
        if a == 1:
            return TABLE["shapley"]
        if a == 0:
            return TABLE["equal-division"]
        if 0 < a < 1:
            return TABLE["egalitarian"]
        if a > 1:
            return TABLE["over-shapley"]
        return {ax: None for ax in AXIOMS}
    if k is RuleKind.WEIGHTED_SHAPLEY and rule.weights is not None and len(set(rule.weights)) == 1:
        return TABLE["shapley"]
    return TABLE[k.value]


def expected(rule: Rule, axiom) -> Optional[bool]:
    key = getattr(axiom, "value", axiom)
    return row_for(rule)[key]
