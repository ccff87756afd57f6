"""Prenucleolus by a sequence of exact least-core programs.

Each round minimises the largest excess ``t`` over the coalitions that are not
yet fixed. Coalitions whose excess equals ``t`` in every optimal solution are
fixed at ``t``; a non-zero dual certifies that directly, and a tight constraint
with a zero dual gets a second program (see :func:`lp.tightness_certificate`).
Rounds stop once the fixed coalitions and ``N`` pin down the allocation.
"""

from __future__ import annotations

from fractions import Fraction

from . import lp
from .game import CoalitionalGame, members

Allocation = tuple[Fraction, ...]


class _Span:
    """Incremental row-echelon basis for membership tests of 0/1 coalition vectors."""

    def __init__(self, n: int):
        self.n = n
        self.rows: list[tuple[int, list[Fraction]]] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: list[Fraction]) -> list[Fraction]:
        vec = list(vec)
        for pivot, row in self.rows:
            f = vec[pivot]
            if f:
                vec = [a - f * b for a, b in zip(vec, row)]
        return vec

    def contains(self, vec) -> bool:
        return not any(self._reduce(vec))

    def add(self, vec) -> bool:
        red = self._reduce(vec)
        pivot = next((j for j, a in enumerate(red) if a), None)
        if pivot is None:
            return False
        inv = 1 / red[pivot]
        red = [a * inv for a in red]
        rows = []
        for p, row in self.rows:
            f = row[pivot]
            rows.append((p, [a - f * b for a, b in zip(row, red)] if f else row))
        rows.append((pivot, red))
        self.rows = rows
        return True


def _indicator(mask: int, n: int) -> list[Fraction]:
    return [Fraction(mask >> i & 1) for i in range(n)]


def _excess(v: CoalitionalGame, mask: int, x) -> Fraction:
    return v.worths[mask] - sum((x[i] for i in members(mask)), Fraction(0))


def least_core_program(
    v: CoalitionalGame, active: list[int], fixed: dict[int, Fraction]
) -> lp.LinearProgram:
    """``min t`` over ``(x, t)`` with efficiency, fixed excesses and ``e(S, x) <= t`` on ``active``."""
    n = v.n
    cons = [lp.Constraint((Fraction(1),) * n + (Fraction(0),), lp.EQ, v.worths[v.grand])]
    for mask, e in fixed.items():
        ind = _indicator(mask, n)
        cons.append(lp.Constraint(tuple(ind) + (Fraction(0),), lp.EQ, v.worths[mask] - e))
    for mask in active:
        ind = _indicator(mask, n)
        cons.append(lp.Constraint(tuple(-a for a in ind) + (Fraction(-1),), lp.LE, -v.worths[mask]))
    objective = (Fraction(0),) * n + (Fraction(1),)
    return lp.LinearProgram(objective, tuple(cons))


def prenucleolus(v: CoalitionalGame) -> Allocation:
    n = v.n
    span = _Span(n)
    span.add(_indicator(v.grand, n))
    if span.rank == n:
        return (v.worths[v.grand],)
    fixed: dict[int, Fraction] = {}
    active = list(range(1, v.grand))
    while True:
        prog = least_core_program(v, active, fixed)
        out = lp.solve(prog)
        if not out.optimal:
            raise RuntimeError(f"least-core program is {out.status.value}; this should not happen")
        t = out.value
        x = out.x[:n]
        offset = 1 + len(fixed)
        newly = []
        for k, mask in enumerate(active):
            if _excess(v, mask, x) != t:
                continue
            if out.duals[offset + k] != 0 or lp.tightness_certificate(prog, offset + k, t):
                newly.append(mask)
        if not newly:
            raise RuntimeError("no coalition could be fixed; the least-core program is degenerate")
        for mask in newly:
            fixed[mask] = t
            span.add(_indicator(mask, n))
        if span.rank == n:
            return tuple(x)
        active = [m for m in active if m not in fixed and not span.contains(_indicator(m, n))]
