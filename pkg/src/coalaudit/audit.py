"""Axiom checkers and randomized counterexample search for allocation rules.

Every check is exact. Instance axioms compare a game ``v`` with a manipulated
game ``w`` for a coalition or a player; pointwise axioms (E, N, S) inspect one
game; additivity (A) inspects a pair and its sum.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .expectations import expected
from .game import (
    CoalitionalGame,
    Domain,
    from_dividends,
    grand,
    is_superadditive,
    members,
    null_players,
    popcount,
    submasks,
    symmetric_pairs,
)
from .rules import Rule, coalition_payoff


class Axiom(str, enum.Enum):
    A = "A"
    E = "E"
    N = "N"
    S = "S"
    RPLUS = "R+"
    R = "R"
    W = "W"
    CMONO = "CMono"
    MPLUS = "M+"
    M = "M"
    CMARG = "CMarg"
    MMINUS = "M-"

    @classmethod
    def parse(cls, text: str) -> Axiom:
        key = text.strip()
        for ax in cls:
            if key.lower() in (ax.value.lower(), ax.name.lower()):
                return ax
        raise ValueError(f"unknown axiom {text!r} (known: {', '.join(a.value for a in cls)})")


POINTWISE = frozenset({Axiom.E, Axiom.N, Axiom.S})
COALITIONAL = frozenset({Axiom.RPLUS, Axiom.R, Axiom.W, Axiom.CMONO})
INDIVIDUAL = frozenset({Axiom.MPLUS, Axiom.M, Axiom.CMARG, Axiom.MMINUS})
# the axioms whose conclusion is an equality
EQUALITY = frozenset({Axiom.M, Axiom.CMARG})


@dataclass(frozen=True)
class ManipulationInstance:
    """Original game ``v``, manipulated game ``w`` and the coalition or player concerned."""

    v: CoalitionalGame
    w: CoalitionalGame
    coalition: Optional[int] = None
    player: Optional[int] = None

    def __post_init__(self):
        if self.v.n != self.w.n:
            raise ValueError(f"games have different player counts ({self.v.n} vs {self.w.n})")
        if self.v.domain is not self.w.domain:
            raise ValueError("both games of an instance must carry the same domain tag")
        if self.coalition is not None and not 0 <= self.coalition <= self.v.grand:
            raise ValueError(f"coalition {self.coalition} out of range")
        if self.player is not None and not 0 <= self.player < self.v.n:
            raise ValueError(f"player {self.player} out of range")

    @property
    def n(self) -> int:
        return self.v.n

    @property
    def domain(self) -> Domain:
        return self.v.domain

    def swapped(self) -> ManipulationInstance:
        return ManipulationInstance(self.w, self.v, self.coalition, self.player)


class Outcome(str, enum.Enum):
    PRECONDITION_NOT_MET = "precondition-not-met"
    HOLDS = "holds"
    VIOLATED = "violated"


@dataclass(frozen=True)
class Verdict:
    """Result of one check. ``gain`` is the violated inequality's slack (positive)."""

    axiom: Axiom
    outcome: Outcome
    gain: Optional[Fraction] = None
    instance: Optional[ManipulationInstance] = None
    players: tuple[int, ...] = ()

    @property
    def violated(self) -> bool:
        return self.outcome is Outcome.VIOLATED


# ---------------------------------------------------------------- preconditions


def _need(inst: ManipulationInstance, what: str) -> int:
    value = inst.coalition if what == "coalition" else inst.player
    if value is None:
        raise ValueError(f"this axiom needs a {what} in the instance")
    return value


def reallocation_precondition(inst: ManipulationInstance) -> bool:
    """R hypothesis in worth form: ``v(M) = w(M)`` and every ``v(S|T) - v(S)`` kept."""
    v, w = inst.v.worths, inst.w.worths
    m = _need(inst, "coalition")
    if v[m] != w[m]:
        return False
    outside = grand(inst.n) & ~m
    for s in submasks(m):
        for t in submasks(outside):
            if v[s | t] - v[s] != w[s | t] - w[s]:
                return False
    return True


def reallocation_precondition_dividends(inst: ManipulationInstance) -> bool:
    """R hypothesis in dividend form: same dividend mass inside ``M``, same dividends elsewhere."""
    m = _need(inst, "coalition")
    dv, dw = inst.v.dividends().dividends, inst.w.dividends().dividends
    inside = sum(dv[t] for t in submasks(m)) == sum(dw[t] for t in submasks(m))
    return inside and all(dv[s] == dw[s] for s in range(1 << inst.n) if s & ~m)


def precondition(axiom: Axiom, inst: ManipulationInstance) -> bool:
    axiom = Axiom(axiom)
    v, w = inst.v.worths, inst.w.worths
    n = inst.n
    full = grand(n)
    if axiom is Axiom.A:
        return True
    if axiom in POINTWISE:
        raise ValueError(f"{axiom.value} is a single-game axiom; use check_pointwise")
    if axiom is Axiom.RPLUS:
        m = _need(inst, "coalition")
        return all(
            v[t] == w[t] for t in range(1 << n) if t & m == 0 or t & m == m
        )
    if axiom is Axiom.R:
        return reallocation_precondition(inst)
    if axiom in (Axiom.W, Axiom.CMONO):
        m = _need(inst, "coalition")
        # literal reading: every S other than M keeps its worth, including N
        return v[m] >= w[m] and all(v[s] == w[s] for s in range(1 << n) if s != m)
    i = _need(inst, "player")
    bit = 1 << i
    diffs = [(v[t | bit] - v[t]) - (w[t | bit] - w[t]) for t in submasks(full & ~bit)]
    if axiom is Axiom.M:
        return all(d == 0 for d in diffs)
    if axiom is Axiom.CMARG:
        return v[full] == w[full] and all(d == 0 for d in diffs)
    if axiom is Axiom.MPLUS:
        return all(d >= 0 for d in diffs)
    if axiom is Axiom.MMINUS:
        return v[full] >= w[full] and all(d >= 0 for d in diffs)
    raise AssertionError(axiom)


# ---------------------------------------------------------------- conclusions


def check_additivity(rule: Rule, v: CoalitionalGame, w: CoalitionalGame) -> Verdict:
    if v.n != w.n:
        raise ValueError(f"games have different player counts ({v.n} vs {w.n})")
    inst = ManipulationInstance(v, w)
    lhs = rule(v + w)
    rhs = [a + b for a, b in zip(rule(v), rule(w))]
    gaps = [abs(a - b) for a, b in zip(lhs, rhs)]
    gap = max(gaps)
    if gap > 0:
        worst = gaps.index(gap)
        return Verdict(Axiom.A, Outcome.VIOLATED, gap, inst, (worst,))
    return Verdict(Axiom.A, Outcome.HOLDS, Fraction(0), inst)


def check_pointwise(rule: Rule, axiom: Axiom, v: CoalitionalGame) -> Verdict:
    axiom = Axiom(axiom)
    pay = rule(v)
    inst = ManipulationInstance(v, v)
    if axiom is Axiom.E:
        gap = abs(sum(pay) - v.worths[v.grand])
        outcome = Outcome.VIOLATED if gap else Outcome.HOLDS
        return Verdict(axiom, outcome, gap, inst)
    if axiom is Axiom.N:
        nulls = null_players(v)
        if not nulls:
            return Verdict(axiom, Outcome.PRECONDITION_NOT_MET, instance=inst)
        worst = max(nulls, key=lambda i: abs(pay[i]))
        gap = abs(pay[worst])
        if gap:
            return Verdict(axiom, Outcome.VIOLATED, gap, inst, (worst,))
        return Verdict(axiom, Outcome.HOLDS, gap, inst)
    if axiom is Axiom.S:
        pairs = symmetric_pairs(v)
        if not pairs:
            return Verdict(axiom, Outcome.PRECONDITION_NOT_MET, instance=inst)
        worst = max(pairs, key=lambda p: abs(pay[p[0]] - pay[p[1]]))
        gap = abs(pay[worst[0]] - pay[worst[1]])
        if gap:
            return Verdict(axiom, Outcome.VIOLATED, gap, inst, worst)
        return Verdict(axiom, Outcome.HOLDS, gap, inst)
    raise ValueError(f"{axiom.value} is not a single-game axiom")


def check_instance(rule: Rule, axiom: Axiom, inst: ManipulationInstance) -> Verdict:
    axiom = Axiom(axiom)
    if axiom is Axiom.A:
        return check_additivity(rule, inst.v, inst.w)
    if axiom in POINTWISE:
        return check_pointwise(rule, axiom, inst.v)
    if not precondition(axiom, inst):
        return Verdict(axiom, Outcome.PRECONDITION_NOT_MET, instance=inst)
    pv, pw = rule(inst.v), rule(inst.w)
    players: tuple[int, ...] = ()
    if axiom in (Axiom.RPLUS, Axiom.R, Axiom.W):
        gain = coalition_payoff(pw, inst.coalition) - coalition_payoff(pv, inst.coalition)
    elif axiom is Axiom.CMONO:
        ms = members(inst.coalition)
        if not ms:
            return Verdict(axiom, Outcome.HOLDS, Fraction(0), inst)
        worst = max(ms, key=lambda i: pw[i] - pv[i])
        gain, players = pw[worst] - pv[worst], (worst,)
    else:
        i = inst.player
        players = (i,)
        gain = pw[i] - pv[i]
        if axiom in EQUALITY:
            gain = abs(gain)
    if gain > 0:
        return Verdict(axiom, Outcome.VIOLATED, gain, inst, players)
    return Verdict(axiom, Outcome.HOLDS, gain, inst, players)


def reverify(rule: Rule, verdict: Verdict) -> bool:
    """Recompute a violation from its witness alone; True iff it reproduces exactly."""
    if not verdict.violated or verdict.instance is None:
        return False
    again = check_instance(rule, verdict.axiom, verdict.instance)
    return again.violated and again.gain == verdict.gain


# ---------------------------------------------------------------- generators


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of a seeded search. Lattice steps are ``k / denominator`` with ``|k| <= radius``."""

    seed: int = 0
    samples: int = 500
    n: int = 3
    domain: Domain = Domain.UNRESTRICTED
    radius: int = 12
    denominator: int = 1
    max_tries: int = 200
    generator: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "domain", Domain(self.domain))
        if self.n < 1:
            raise ValueError("need at least one player")
        if self.radius < 1 or self.denominator < 1:
            raise ValueError("radius and denominator must be positive")

    def describe(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "players": self.n,
            "domain": self.domain.value,
            "radius": self.radius,
            "denominator": self.denominator,
        }


def _step(rng: random.Random, cfg: SearchConfig, radius: Optional[int] = None) -> Fraction:
    r = cfg.radius if radius is None else radius
    return Fraction(rng.randint(-r, r), cfg.denominator)


def _dividend_game(dividends: list[Fraction], n: int, domain: Domain) -> Optional[CoalitionalGame]:
    g = from_dividends(dividends, n)
    if domain is Domain.SUPERADDITIVE:
        if not is_superadditive(g):
            return None
        return g.with_domain(domain)
    return g


def random_dividends(rng: random.Random, n: int, domain: Domain, radius: int = 12) -> list[Fraction]:
    """Sparse integer dividends; non-negative beyond singletons on the superadditive domain."""
    d = [Fraction(0)] * (1 << n)
    for mask in range(1, 1 << n):
        if popcount(mask) == 1:
            d[mask] = Fraction(rng.randint(-radius, radius))
        elif rng.random() < 0.6:
            lo = 0 if domain is Domain.SUPERADDITIVE else -radius
            d[mask] = Fraction(rng.randint(lo, radius))
    return d


def _decorate(rng: random.Random, d: list[Fraction], n: int, style: str) -> list[Fraction]:
    """Inject structure the pointwise axioms need (null player, symmetric pair, full symmetry)."""
    if style == "null" and n >= 1:
        k = rng.randrange(n)
        return [Fraction(0) if mask >> k & 1 else x for mask, x in enumerate(d)]
    if style == "pair" and n >= 2:
        i, j = rng.sample(range(n), 2)

        def swap(mask: int) -> int:
            bi, bj = mask >> i & 1, mask >> j & 1
            return mask & ~(1 << i | 1 << j) | bi << j | bj << i

        return [d[mask] + d[swap(mask)] for mask in range(1 << n)]
    if style == "symmetric":
        by_size = {}
        for mask in range(1, 1 << n):
            k = popcount(mask)
            if k not in by_size:
                by_size[k] = d[mask]
        return [Fraction(0)] + [by_size[popcount(mask)] for mask in range(1, 1 << n)]
    return d


def random_game(
    rng: random.Random, n: int, domain: Domain = Domain.UNRESTRICTED, radius: int = 12, style: str = "plain"
) -> CoalitionalGame:
    """A random integer game; on the superadditive domain it has non-negative dividends."""
    d = _decorate(rng, random_dividends(rng, n, domain, radius), n, style)
    g = from_dividends(d, n)
    return g.with_domain(domain) if domain is Domain.SUPERADDITIVE else g


def _base(rng: random.Random, cfg: SearchConfig) -> CoalitionalGame:
    style = rng.choice(["plain", "plain", "null", "pair", "symmetric"])
    return random_game(rng, cfg.n, cfg.domain, cfg.radius, style)


def _coalition(rng: random.Random, n: int, min_size: int = 1) -> int:
    choices = [m for m in range(1, 1 << n) if popcount(m) >= min_size]
    return rng.choice(choices) if choices else (1 << n) - 1


def _retry(cfg: SearchConfig, rng: random.Random, make: Callable[[], Optional[ManipulationInstance]]):
    for _ in range(cfg.max_tries):
        inst = make()
        if inst is not None:
            return inst
    return None


def _perturb_dividends(
    rng: random.Random, cfg: SearchConfig, v: CoalitionalGame, free: list[int], zero_sum: bool
) -> Optional[CoalitionalGame]:
    d = list(v.dividends().dividends)
    r = rng.randint(1, cfg.radius)
    deltas = [_step(rng, cfg, r) for _ in free]
    if zero_sum and deltas:
        k = rng.randrange(len(deltas))
        deltas[k] -= sum(deltas)
    for mask, delta in zip(free, deltas):
        d[mask] += delta
    return _dividend_game(d, v.n, v.domain)


def gen_reallocation(rng: random.Random, cfg: SearchConfig) -> Optional[ManipulationInstance]:
    """Move dividend mass among subsets of ``M``; everything touching outsiders stays."""
    v = _base(rng, cfg)
    m = _coalition(rng, cfg.n, min_size=2 if cfg.n >= 2 else 1)
    free = [t for t in submasks(m) if t]

    def make():
        w = _perturb_dividends(rng, cfg, v, free, zero_sum=True)
        return None if w is None else ManipulationInstance(v, w, coalition=m)

    return _retry(cfg, rng, make)


def gen_strong_reallocation(rng: random.Random, cfg: SearchConfig) -> Optional[ManipulationInstance]:
    """Rewrite worths of coalitions that meet ``M`` without containing it."""
    v = _base(rng, cfg)
    m = _coalition(rng, cfg.n)
    free = [t for t in range(1, 1 << cfg.n) if t & m and t & m != m]

    def make():
        r = rng.randint(1, cfg.radius)
        worths = list(v.worths)
        for t in free:
            worths[t] += _step(rng, cfg, r)
        w = CoalitionalGame(cfg.n, tuple(worths))
        if cfg.domain is Domain.SUPERADDITIVE:
            if not is_superadditive(w):
                return None
            w = w.with_domain(cfg.domain)
        return ManipulationInstance(v, w, coalition=m)

    return _retry(cfg, rng, make)


def gen_lower_worth(rng: random.Random, cfg: SearchConfig) -> Optional[ManipulationInstance]:
    """Lower ``v(M)`` by a positive lattice step; nothing else changes."""
    v = _base(rng, cfg)
    m = _coalition(rng, cfg.n)

    def make():
        delta = Fraction(rng.randint(1, cfg.radius), cfg.denominator)
        w = v.with_worth(m, v.worths[m] - delta)
        if cfg.domain is Domain.SUPERADDITIVE:
            if not is_superadditive(w):
                return None
            w = w.with_domain(cfg.domain)
        return ManipulationInstance(v, w, coalition=m)

    return _retry(cfg, rng, make)


def gen_constrained_marginality(rng: random.Random, cfg: SearchConfig) -> Optional[ManipulationInstance]:
    """Shift dividends among coalitions without ``i`` keeping their total, so ``v(N)`` is kept."""
    v = _base(rng, cfg)
    i = rng.randrange(cfg.n)
    free = [t for t in range(1, 1 << cfg.n) if not t >> i & 1]

    def make():
        w = _perturb_dividends(rng, cfg, v, free, zero_sum=True)
        return None if w is None else ManipulationInstance(v, w, player=i)

    return _retry(cfg, rng, make)


def gen_marginality(rng: random.Random, cfg: SearchConfig) -> Optional[ManipulationInstance]:
    """Change any dividends of coalitions without ``i``."""
    v = _base(rng, cfg)
    i = rng.randrange(cfg.n)
    free = [t for t in range(1, 1 << cfg.n) if not t >> i & 1]

    def make():
        w = _perturb_dividends(rng, cfg, v, free, zero_sum=False)
        return None if w is None else ManipulationInstance(v, w, player=i)

    return _retry(cfg, rng, make)


def _gen_monotone(rng: random.Random, cfg: SearchConfig, cap_grand: bool) -> Optional[ManipulationInstance]:
    v = _base(rng, cfg)
    n = cfg.n
    i = rng.randrange(n)
    bit = 1 << i
    rest = grand(n) & ~bit

    def make():
        r = rng.randint(1, cfg.radius)
        worths = list(v.worths)
        keep_outside = rng.random() < 0.3
        for t in submasks(rest):
            g = Fraction(0) if t == 0 or keep_outside else _step(rng, cfg, r)
            h = Fraction(rng.randint(0, r), cfg.denominator) if rng.random() < 0.7 else Fraction(0)
            if cap_grand and t == rest and g - h > 0:
                h = g + Fraction(rng.randint(0, r), cfg.denominator)
            worths[t] += g
            worths[t | bit] += g - h
        w = CoalitionalGame(n, tuple(worths))
        if cfg.domain is Domain.SUPERADDITIVE:
            if not is_superadditive(w):
                return None
            w = w.with_domain(cfg.domain)
        return ManipulationInstance(v, w, player=i)

    return _retry(cfg, rng, make)


def gen_strong_monotonicity(rng: random.Random, cfg: SearchConfig) -> Optional[ManipulationInstance]:
    """Lower some marginal contributions of ``i`` and rewrite coalitions without ``i`` freely."""
    return _gen_monotone(rng, cfg, cap_grand=False)


def gen_weak_monotonicity(rng: random.Random, cfg: SearchConfig) -> Optional[ManipulationInstance]:
    """As the strong-monotonicity generator, but never raising ``v(N)``."""
    return _gen_monotone(rng, cfg, cap_grand=True)


def gen_pair(rng: random.Random, cfg: SearchConfig) -> Optional[ManipulationInstance]:
    return ManipulationInstance(_base(rng, cfg), _base(rng, cfg))


def gen_single(rng: random.Random, cfg: SearchConfig, style: Optional[str] = None) -> ManipulationInstance:
    v = random_game(rng, cfg.n, cfg.domain, cfg.radius, style) if style else _base(rng, cfg)
    return ManipulationInstance(v, v)


GENERATORS: dict[str, Callable[[random.Random, SearchConfig], Optional[ManipulationInstance]]] = {
    "reallocation": gen_reallocation,
    "strong-reallocation": gen_strong_reallocation,
    "lower-worth": gen_lower_worth,
    "constrained-marginality": gen_constrained_marginality,
    "marginality": gen_marginality,
    "strong-monotonicity": gen_strong_monotonicity,
    "weak-monotonicity": gen_weak_monotonicity,
    "pair": gen_pair,
    "single": gen_single,
    "null-player": lambda rng, cfg: gen_single(rng, cfg, "null"),
    "symmetric-pair": lambda rng, cfg: gen_single(rng, cfg, rng.choice(["pair", "symmetric"])),
}

DEFAULT_GENERATOR = {
    Axiom.A: "pair",
    Axiom.E: "single",
    Axiom.N: "null-player",
    Axiom.S: "symmetric-pair",
    Axiom.RPLUS: "strong-reallocation",
    Axiom.R: "reallocation",
    Axiom.W: "lower-worth",
    Axiom.CMONO: "lower-worth",
    Axiom.MPLUS: "strong-monotonicity",
    Axiom.M: "marginality",
    Axiom.CMARG: "constrained-marginality",
    Axiom.MMINUS: "weak-monotonicity",
}


def sample_rng(cfg: SearchConfig, axiom: Axiom, k: int) -> random.Random:
    # string seeds hash with sha512, so streams do not depend on PYTHONHASHSEED
    return random.Random(f"{cfg.seed}/{Axiom(axiom).value}/{cfg.n}/{cfg.domain.value}/{k}")


def generate(axiom: Axiom, cfg: SearchConfig, k: int) -> Optional[ManipulationInstance]:
    """The ``k``-th instance of the seeded stream for ``axiom``; ``None`` if rejection failed."""
    axiom = Axiom(axiom)
    name = cfg.generator or DEFAULT_GENERATOR[axiom]
    try:
        gen = GENERATORS[name]
    except KeyError:
        raise ValueError(f"unknown generator {name!r} (known: {', '.join(GENERATORS)})") from None
    return gen(sample_rng(cfg, axiom, k), cfg)


def _assert_domain(inst: ManipulationInstance, domain: Domain) -> None:
    if domain is Domain.SUPERADDITIVE:
        if not (is_superadditive(inst.v) and is_superadditive(inst.w)):
            raise AssertionError("generator produced a non-superadditive game on the superadditive domain")


def iter_verdicts(rule: Rule, axiom: Axiom, cfg: SearchConfig) -> Iterator[tuple[int, Optional[Verdict]]]:
    """Seeded stream of ``(sample index, verdict)``; the verdict is ``None`` when generation failed."""
    axiom = Axiom(axiom)
    for k in range(cfg.samples):
        inst = generate(axiom, cfg, k)
        if inst is None:
            yield k, None
            continue
        _assert_domain(inst, cfg.domain)
        yield k, check_instance(rule, axiom, inst)


def find_violations(rule: Rule, axiom: Axiom, cfg: SearchConfig, limit: Optional[int] = None) -> list[Verdict]:
    found = []
    for _, verdict in iter_verdicts(rule, axiom, cfg):
        if verdict is not None and verdict.violated:
            found.append(verdict)
            if limit is not None and len(found) >= limit:
                break
    return found


def search_counterexample(rule: Rule, axiom: Axiom, cfg: SearchConfig) -> Optional[Verdict]:
    """First violation in the seeded stream, or ``None`` after ``cfg.samples`` instances."""
    hits = find_violations(rule, axiom, cfg, limit=1)
    return hits[0] if hits else None


# ---------------------------------------------------------------- reports


@dataclass
class AxiomSummary:
    axiom: Axiom
    expected: Optional[bool]
    samples: int = 0
    applicable: int = 0
    skipped: int = 0
    superadditive_checked: int = 0
    witness: Optional[Verdict] = None

    @property
    def violated(self) -> bool:
        return self.witness is not None

    @property
    def unexpected(self) -> bool:
        """A violation of an axiom the rule is expected to satisfy."""
        return self.violated and self.expected is True

    @property
    def missed(self) -> bool:
        """An expected failure that the sample did not exhibit (informational only)."""
        return not self.violated and self.expected is False

    @property
    def status(self) -> str:
        if self.violated:
            return "violated"
        if self.applicable == 0:
            return "untested"
        return "pass"


@dataclass
class AuditReport:
    rule: Rule
    configs: list[SearchConfig]
    summaries: dict[tuple[int, Axiom], AxiomSummary] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(s.unexpected for s in self.summaries.values())

    def by_axiom(self) -> dict[Axiom, list[AxiomSummary]]:
        out: dict[Axiom, list[AxiomSummary]] = {}
        for (_, ax), s in self.summaries.items():
            out.setdefault(ax, []).append(s)
        return out

    def violated_axioms(self) -> set[Axiom]:
        return {ax for (_, ax), s in self.summaries.items() if s.violated}


def audit_axiom(rule: Rule, axiom: Axiom, cfg: SearchConfig) -> AxiomSummary:
    axiom = Axiom(axiom)
    summary = AxiomSummary(axiom, expected(rule, axiom))
    for _, verdict in iter_verdicts(rule, axiom, cfg):
        summary.samples += 1
        if verdict is None:
            summary.skipped += 1
            continue
        if cfg.domain is Domain.SUPERADDITIVE:
            summary.superadditive_checked += 1
        if verdict.outcome is Outcome.PRECONDITION_NOT_MET:
            continue
        summary.applicable += 1
        if verdict.violated:
            if not reverify(rule, verdict):
                raise AssertionError(f"witness for {axiom.value} does not reproduce")
            summary.witness = verdict
            break
    return summary


def audit(rule: Rule, axioms, configs: list[SearchConfig]) -> AuditReport:
    """Run every axiom under every config; each cell stops at its first (re-verified) violation."""
    report = AuditReport(rule, list(configs))
    for cfg in configs:
        for ax in axioms:
            report.summaries[(cfg.n, Axiom(ax))] = audit_axiom(rule, ax, cfg)
    return report


# ---------------------------------------------------------------- reallocation vs constrained marginality


@dataclass
class TranslationReport:
    samples: int = 0
    cmarg_witnesses: list[tuple[Verdict, Verdict]] = field(default_factory=list)
    r_witnesses: list[tuple[Verdict, Verdict]] = field(default_factory=list)
    disagreements: list[str] = field(default_factory=list)
    inefficient: int = 0

    @property
    def agree(self) -> bool:
        return not self.disagreements and not self.inefficient


def _efficient(rule: Rule, v: CoalitionalGame) -> bool:
    return sum(rule(v)) == v.worths[v.grand]


def verify_lemma2_equivalence(
    rule: Rule, cfg: SearchConfig, min_witnesses: int = 0, max_samples: Optional[int] = None
) -> TranslationReport:
    """Cross-check constrained marginality against reallocation-proofness for an efficient rule.

    A constrained-marginality instance for player ``i`` is read as a reallocation
    instance for ``N - {i}`` (in whichever orientation is violated), and a
    reallocation violation for ``M`` must reappear as a constrained-marginality
    violation for some outsider. Sampling continues past ``cfg.samples`` until
    ``min_witnesses`` translations of each kind are collected or ``max_samples``
    is reached.
    """
    rep = TranslationReport()
    limit = max_samples if max_samples is not None else max(cfg.samples, 1) * 20
    full = grand(cfg.n)
    k = 0
    while k < limit:
        if k >= cfg.samples and len(rep.cmarg_witnesses) >= min_witnesses and len(rep.r_witnesses) >= min_witnesses:
            break
        rep.samples += 1
        cm_inst = generate(Axiom.CMARG, cfg, k)
        if cm_inst is not None:
            if not (_efficient(rule, cm_inst.v) and _efficient(rule, cm_inst.w)):
                rep.inefficient += 1
            else:
                i = cm_inst.player
                m = full & ~(1 << i)
                cm = check_instance(rule, Axiom.CMARG, cm_inst)
                forward = check_instance(rule, Axiom.R, ManipulationInstance(cm_inst.v, cm_inst.w, coalition=m))
                backward = check_instance(rule, Axiom.R, ManipulationInstance(cm_inst.w, cm_inst.v, coalition=m))
                if forward.outcome is Outcome.PRECONDITION_NOT_MET:
                    rep.disagreements.append(f"sample {k}: CMarg instance does not translate to an R instance")
                else:
                    r_hit = forward if forward.violated else backward
                    if cm.violated != r_hit.violated:
                        rep.disagreements.append(f"sample {k}: CMarg {cm.outcome.value} but R {r_hit.outcome.value}")
                    elif cm.violated:
                        if r_hit.gain != cm.gain or not reverify(rule, r_hit):
                            rep.disagreements.append(f"sample {k}: translated R gain differs")
                        else:
                            rep.cmarg_witnesses.append((cm, r_hit))
        r_inst = generate(Axiom.R, cfg, k)
        if r_inst is not None and _efficient(rule, r_inst.v) and _efficient(rule, r_inst.w):
            r = check_instance(rule, Axiom.R, r_inst)
            if r.violated:
                hits = []
                for j in members(full & ~r_inst.coalition):
                    cm = check_instance(rule, Axiom.CMARG, ManipulationInstance(r_inst.v, r_inst.w, player=j))
                    if cm.outcome is Outcome.PRECONDITION_NOT_MET:
                        rep.disagreements.append(f"sample {k}: outsider {j} fails the CMarg hypothesis")
                    elif cm.violated:
                        hits.append(cm)
                if not hits:
                    rep.disagreements.append(f"sample {k}: R violated but no outsider violates CMarg")
                elif reverify(rule, hits[0]):
                    rep.r_witnesses.append((r, hits[0]))
                else:
                    rep.disagreements.append(f"sample {k}: translated CMarg witness does not reproduce")
        k += 1
    return rep
