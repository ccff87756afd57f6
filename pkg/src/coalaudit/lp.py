"""Exact linear programming: dense two-phase tableau simplex with Bland's rule.

Programs are minimisations. Input and output numbers are ``Fraction``; the
tableau itself runs on ``gmpy2.mpq``, which is exact and much faster.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from gmpy2 import mpq

LE, EQ, GE = "<=", "=", ">="


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * xi for c, xi in zip(self.coeffs, x)), Fraction(0))

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = self.lhs(x)
        if self.relation == LE:
            return lhs <= self.rhs
        if self.relation == GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """Minimise ``objective . x`` subject to ``constraints`` and optional bounds.

    ``lower``/``upper`` default to ``None`` (free variable) per coordinate.
    """

    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...] = ()
    lower: Optional[tuple[Optional[Fraction], ...]] = None
    upper: Optional[tuple[Optional[Fraction], ...]] = None

    def __post_init__(self):
        nvar = len(self.objective)
        if nvar == 0:
            raise ValueError("a linear program needs at least one variable")
        object.__setattr__(self, "objective", tuple(Fraction(c) for c in self.objective))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for con in self.constraints:
            if len(con.coeffs) != nvar:
                raise ValueError(
                    f"constraint has {len(con.coeffs)} coefficients, expected {nvar}"
                )
        for name in ("lower", "upper"):
            bounds = getattr(self, name)
            if bounds is None:
                bounds = (None,) * nvar
            if len(bounds) != nvar:
                raise ValueError(f"{name} bounds have wrong length")
            object.__setattr__(
                self, name, tuple(None if b is None else Fraction(b) for b in bounds)
            )

    @property
    def nvar(self) -> int:
        return len(self.objective)

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        for xi, lo, hi in zip(x, self.lower, self.upper):
            if lo is not None and xi < lo:
                return False
            if hi is not None and xi > hi:
                return False
        return all(con.holds(x) for con in self.constraints)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * xi for c, xi in zip(self.objective, x)), Fraction(0))


@dataclass(frozen=True)
class LpOutcome:
    status: Status
    x: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None
    # One multiplier per constraint; the objective equals sum(rhs * dual) plus bound terms,
    # and a non-zero multiplier means the constraint is tight in every optimal solution.
    duals: Optional[tuple[Fraction, ...]] = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class _Tableau:
    """Rows ``[a_1..a_m | b]`` over standard-form columns, plus reduced-cost row."""

    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r: int, c: int) -> None:
        rows, rhs = self.rows, self.rhs
        prow = rows[r]
        piv = prow[c]
        if piv != 1:
            inv = 1 / piv
            prow = rows[r] = [a * inv for a in prow]
            rhs[r] = rhs[r] * inv
        nz = [(j, a) for j, a in enumerate(prow) if a != 0]
        br = rhs[r]
        for k, row in enumerate(rows):
            if k == r:
                continue
            f = row[c]
            if f == 0:
                continue
            for j, a in nz:
                row[j] -= f * a
            rhs[k] -= f * br
        self.basis[r] = c

    def reduced_costs(self, cost):
        """``c_j - c_B B^-1 A_j`` for every column, and the current objective."""
        red = list(cost)
        obj = mpq(0)
        for row, b, bc in zip(self.rows, self.rhs, self.basis):
            cb = cost[bc]
            if cb == 0:
                continue
            for j, a in enumerate(row):
                if a != 0:
                    red[j] -= cb * a
            obj += cb * b
        return red, obj

    def run(self, cost, allowed) -> bool:
        """Bland's-rule simplex on ``cost``; returns False if unbounded."""
        red, _ = self.reduced_costs(cost)
        rows, rhs, basis = self.rows, self.rhs, self.basis
        while True:
            enter = next((j for j in range(self.ncols) if allowed[j] and red[j] < 0), None)
            if enter is None:
                return True
            leave = None
            best = None
            for k, row in enumerate(rows):
                a = row[enter]
                if a > 0:
                    ratio = rhs[k] / a
                    if best is None or ratio < best or (ratio == best and basis[k] < basis[leave]):
                        best, leave = ratio, k
            if leave is None:
                return False
            f = red[enter]
            self.pivot(leave, enter)
            prow = rows[leave]
            for j, a in enumerate(prow):
                if a != 0:
                    red[j] -= f * a


def solve(lp: LinearProgram) -> LpOutcome:
    nvar = lp.nvar
    # Map each original variable to standard-form columns x = offset + sum(sign * col).
    cols: list[list[tuple[int, int]]] = []
    offsets: list[mpq] = []
    extra_rows: list[tuple[dict[int, mpq], str, mpq]] = []
    ncols = 0
    for lo, hi in zip(lp.lower, lp.upper):
        if lo is not None:
            cols.append([(ncols, 1)])
            offsets.append(mpq(lo))
            if hi is not None:
                extra_rows.append(({ncols: mpq(1)}, LE, mpq(hi - lo)))
            ncols += 1
        elif hi is not None:
            cols.append([(ncols, -1)])
            offsets.append(mpq(hi))
            ncols += 1
        else:
            cols.append([(ncols, 1), (ncols + 1, -1)])
            offsets.append(mpq(0))
            ncols += 2
    nstruct = ncols

    raw_rows: list[tuple[dict[int, mpq], str, mpq]] = []
    for con in lp.constraints:
        row: dict[int, mpq] = {}
        rhs = mpq(con.rhs)
        for j, a in enumerate(con.coeffs):
            if a == 0:
                continue
            a = mpq(a)
            rhs -= a * offsets[j]
            for col, sign in cols[j]:
                row[col] = row.get(col, mpq(0)) + sign * a
        raw_rows.append((row, con.relation, rhs))
    raw_rows.extend(extra_rows)
    m = len(raw_rows)
    n_user = len(lp.constraints)

    # Slack/surplus columns, then one artificial per row that lacks a unit basis column.
    slack_col: list[Optional[int]] = []
    for _, rel, _ in raw_rows:
        if rel == EQ:
            slack_col.append(None)
        else:
            slack_col.append(ncols)
            ncols += 1
    dense = []
    rhs_vec = []
    flipped = []
    for k, (row, rel, rhs) in enumerate(raw_rows):
        vec = [mpq(0)] * ncols
        for col, a in row.items():
            vec[col] = a
        if rel == LE:
            vec[slack_col[k]] = mpq(1)
        elif rel == GE:
            vec[slack_col[k]] = mpq(-1)
        flip = rhs < 0
        if flip:
            vec = [-a for a in vec]
            rhs = -rhs
        dense.append(vec)
        rhs_vec.append(rhs)
        flipped.append(flip)

    basis = []
    unit_col: list[int] = []
    art_start = ncols
    for k in range(m):
        sc = slack_col[k]
        if sc is not None and dense[k][sc] == 1:
            basis.append(sc)
            unit_col.append(sc)
        else:
            basis.append(ncols)
            unit_col.append(ncols)
            ncols += 1
    for vec in dense:
        vec.extend([mpq(0)] * (ncols - len(vec)))
    for k in range(m):
        if basis[k] >= art_start:
            dense[k][basis[k]] = mpq(1)

    tab = _Tableau(dense, rhs_vec, basis, ncols)
    allowed = [True] * ncols

    if ncols > art_start:
        phase1 = [mpq(0)] * art_start + [mpq(1)] * (ncols - art_start)
        tab.run(phase1, allowed)
        _, infeas = tab.reduced_costs(phase1)
        if infeas > 0:
            return LpOutcome(Status.INFEASIBLE)
        # Drive zero-level artificials out of the basis; drop rows that are redundant.
        k = 0
        while k < len(tab.rows):
            if tab.basis[k] >= art_start:
                row = tab.rows[k]
                c = next((j for j in range(art_start) if row[j] != 0), None)
                if c is None:
                    del tab.rows[k], tab.rhs[k], tab.basis[k]
                    continue
                tab.pivot(k, c)
            k += 1
        for j in range(art_start, ncols):
            allowed[j] = False

    cost = [mpq(0)] * ncols
    for j, c in enumerate(lp.objective):
        if c == 0:
            continue
        for col, sign in cols[j]:
            cost[col] += sign * mpq(c)
    if not tab.run(cost, allowed):
        return LpOutcome(Status.UNBOUNDED)

    level = [mpq(0)] * ncols
    for b, r in zip(tab.basis, tab.rhs):
        level[b] = r
    x = []
    for j in range(nvar):
        val = offsets[j]
        for col, sign in cols[j]:
            val += sign * level[col]
        x.append(_frac(val))

    red, _ = tab.reduced_costs(cost)
    duals = []
    for k in range(n_user):
        # Column unit_col[k] started as +e_k (after the optional flip), so its reduced
        # cost is -y_k for the flipped row.
        y = -red[unit_col[k]]
        if flipped[k]:
            y = -y
        duals.append(_frac(y))
    x = tuple(x)
    return LpOutcome(Status.OPTIMAL, x, lp.value(x), tuple(duals))


def tightness_certificate(
    lp: LinearProgram, index: int, optimum: Optional[Fraction] = None
) -> bool:
    """True iff constraint ``index`` is tight in every optimal solution of ``lp``.

    Decided by a second program that maximises the constraint's slack over the
    optimal face. ``optimum`` skips re-solving ``lp`` when already known.
    """
    con = lp.constraints[index]
    if con.relation == EQ:
        return True
    if optimum is None:
        out = solve(lp)
        if not out.optimal:
            raise ValueError(f"tightness is only defined for optimal programs, got {out.status.value}")
        optimum = out.value
    face = lp.constraints + (Constraint(lp.objective, EQ, optimum),)
    # slack of a <= row is rhs - lhs, so maximising it minimises lhs; >= rows mirror that
    sign = 1 if con.relation == LE else -1
    probe = LinearProgram(tuple(sign * c for c in con.coeffs), face, lp.lower, lp.upper)
    out = solve(probe)
    if out.status is Status.UNBOUNDED:
        return False
    if not out.optimal:
        raise ValueError("optimal face is empty; the supplied optimum is wrong")
    return sign * out.value == con.rhs
