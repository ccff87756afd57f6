"""Command-line front end.

Exit codes: 0 success, 1 violation found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import gamefile
from .audit import Axiom, AuditReport, SearchConfig, Verdict, audit, random_game
from .expectations import AXIOMS
from .game import MAX_PLAYERS, Domain, add_modular, from_dividends, members
from .gamefile import GameFileError, GameSpec
from .manipulate import Budget, ManipulationQuery, Mode, explain, optimize
from .rules import Rule, RuleKind, coalition_payoff, parse_kind

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _decimal(q: Fraction, digits: int = 6) -> str:
    text = f"{float(q):.{digits}f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def _rule_from_args(args) -> Rule:
    text = args.rule
    if args.weights is not None and args.alpha is not None:
        raise UsageError("--weights and --alpha belong to different rules")
    extra = args.weights if args.weights is not None else args.alpha
    try:
        if extra is not None:
            head, _, params = text.partition(":")
            if params:
                raise ValueError(f"rule {text!r} already carries parameters")
            kind = parse_kind(head)
            if args.weights is not None and kind is not RuleKind.WEIGHTED_SHAPLEY:
                raise ValueError("--weights only applies to weighted-shapley")
            if args.alpha is not None and kind not in (RuleKind.EGALITARIAN_SHAPLEY, RuleKind.SHAPLEY_ED_MIXTURE):
                raise ValueError("--alpha only applies to egalitarian-shapley and shapley-ed-mixture")
            values = [gamefile.parse_rational(p) for p in extra.split(",")]
            if args.weights is not None:
                return Rule(kind, weights=tuple(values))
            if len(values) != 1:
                raise ValueError("--alpha takes a single value")
            return Rule(kind, alpha=values[0])
        return Rule.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None


def _check_rule_size(rule: Rule, n: int) -> None:
    if rule.kind is RuleKind.PHI_TWO_PLAYER and n != 2:
        raise UsageError(f"phi2 is only defined for two players, the game has {n}")
    if rule.weights is not None and len(rule.weights) != n:
        raise UsageError(f"rule has {len(rule.weights)} weights but the game has {n} players")


def _add_rule_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rule", default="shapley", help="rule id, optionally with parameters (kind:params)")
    p.add_argument("--weights", help="comma-separated positive weights for weighted-shapley")
    p.add_argument("--alpha", help="Shapley share for egalitarian-shapley or shapley-ed-mixture")


# ---------------------------------------------------------------- eval


def cmd_eval(args) -> int:
    spec = gamefile.load(args.file)
    v = spec.game()
    rule = _rule_from_args(args)
    _check_rule_size(rule, v.n)
    alloc = rule(v)
    if args.format == "json":
        _emit_json(
            {
                "rule": rule.name,
                "allocation": {p: str(alloc[i]) for i, p in enumerate(spec.players)},
                "total": str(sum(alloc, Fraction(0))),
            }
        )
        return EXIT_OK
    width = max(5, *(len(p) for p in spec.players))
    print(f"rule: {rule.name}")
    for i, p in enumerate(spec.players):
        print(f"  {p:<{width}}  {str(alloc[i]):>12}  ~ {_decimal(alloc[i])}")
    total = sum(alloc, Fraction(0))
    print(f"  {'total':<{width}}  {str(total):>12}  ~ {_decimal(total)}")
    return EXIT_OK


# ---------------------------------------------------------------- audit


def _verdict_doc(v: Verdict, players: Sequence[str]) -> dict:
    inst = v.instance
    doc: dict = {"axiom": v.axiom.value, "gain": str(v.gain)}
    if v.players:
        doc["players"] = [players[i] for i in v.players]
    if inst is not None:
        if inst.coalition is not None:
            doc["coalition"] = [players[i] for i in members(inst.coalition)]
        if inst.player is not None:
            doc["player"] = players[inst.player]
        doc["v"] = gamefile.to_document(gamefile.spec_for_game(inst.v, players))
        if inst.w is not inst.v:
            doc["w"] = gamefile.to_document(gamefile.spec_for_game(inst.w, players))
    return doc


def _report_doc(report: AuditReport) -> dict:
    cells = []
    for (n, ax), s in report.summaries.items():
        players = gamefile.default_players(n)
        cell = {
            "players": n,
            "axiom": ax.value,
            "expected": s.expected,
            "status": s.status,
            "unexpected": s.unexpected,
            "samples": s.samples,
            "applicable": s.applicable,
        }
        if s.witness is not None:
            cell["witness"] = _verdict_doc(s.witness, players)
        cells.append(cell)
    return {
        "rule": report.rule.name,
        "configs": [c.describe() for c in report.configs],
        "cells": cells,
        "ok": report.ok,
    }


def _print_witness(v: Verdict, n: int) -> None:
    players = gamefile.default_players(n)
    inst = v.instance
    print(f"      gain {v.gain}", end="")
    if inst is not None and inst.coalition is not None:
        print(f", coalition {{{','.join(players[i] for i in members(inst.coalition))}}}", end="")
    if inst is not None and inst.player is not None:
        print(f", player {players[inst.player]}", end="")
    if v.players:
        print(f", players {','.join(players[i] for i in v.players)}", end="")
    print()
    if inst is None:
        return
    print("      v = " + " ".join(str(x) for x in inst.v.worths[1:]))
    if inst.w is not inst.v:
        print("      w = " + " ".join(str(x) for x in inst.w.worths[1:]))


def cmd_audit(args) -> int:
    rule = _rule_from_args(args)
    try:
        axioms = [Axiom.parse(a) for a in args.axioms.split(",")] if args.axioms else [Axiom(a) for a in AXIOMS]
        sizes = [int(p) for p in str(args.players).split(",")]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for n in sizes:
        if not 1 <= n <= MAX_PLAYERS:
            raise UsageError(f"player count must lie in 1..{MAX_PLAYERS}, got {n}")
        _check_rule_size(rule, n)
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    configs = [SearchConfig(seed=args.seed, samples=args.samples, n=n, domain=Domain(args.domain)) for n in sizes]
    report = audit(rule, axioms, configs)
    if args.format == "json":
        _emit_json(_report_doc(report))
    else:
        print(f"rule: {rule.name}  domain: {args.domain}  seed: {args.seed}  samples: {args.samples}")
        for (n, ax), s in report.summaries.items():
            exp = {True: "holds", False: "fails", None: "-"}[s.expected]
            flag = "  UNEXPECTED" if s.unexpected else ""
            print(f"  n={n} {ax.value:<6} {s.status:<9} expected {exp:<6} applicable {s.applicable}/{s.samples}{flag}")
            if s.witness is not None:
                _print_witness(s.witness, n)
        print("result: " + ("ok" if report.ok else "unexpected violations"))
    return EXIT_OK if report.ok else EXIT_VIOLATION


# ---------------------------------------------------------------- manipulate


def cmd_manipulate(args) -> int:
    spec = gamefile.load(args.file)
    v = spec.game()
    rule = _rule_from_args(args)
    _check_rule_size(rule, v.n)
    names = [s.strip() for s in args.coalition.split(",") if s.strip()]
    m = gamefile.coalition_mask(spec.players, names, "--coalition")
    if m == 0:
        raise UsageError("--coalition must name at least one player")
    try:
        mode = Mode.parse(args.mode)
        budget = Budget(args.radius, args.denominator, args.samples, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = optimize(ManipulationQuery(rule, v, m, mode, budget))
    before = coalition_payoff(rule(v), m)
    diff = explain(v, result.best_w, m, mode, rule) if result.best_w is not None else None
    if args.format == "json":
        doc: dict = {
            "rule": rule.name,
            "mode": mode.value,
            "coalition": [spec.players[i] for i in members(m)],
            "gain": str(result.gain),
            "evaluated": result.evaluated,
            "rejected": result.rejected,
            "payoff": str(before),
        }
        if result.exact_constant is not None:
            doc["exact_constant"] = result.exact_constant
        if diff is not None:
            doc["witness"] = gamefile.to_document(gamefile.spec_for_game(result.best_w, spec.players))
            doc["changed_worths"] = [
                {"coalition": [spec.players[i] for i in members(t)], "from": str(a), "to": str(b)}
                for t, a, b in diff.changed_worths
            ]
            doc["changed_dividends"] = [
                {"coalition": [spec.players[i] for i in members(t)], "from": str(a), "to": str(b)}
                for t, a, b in diff.changed_dividends
            ]
            doc["payoffs"] = {spec.players[i]: {"from": str(a), "to": str(b)} for i, a, b in diff.payoffs}
        _emit_json(doc)
    else:
        print(f"rule: {rule.name}  mode: {mode.value}  coalition: {spec.label(m)}")
        print(f"candidates evaluated: {result.evaluated}  rejected: {result.rejected}")
        if result.exact_constant is not None:
            print(f"payoff constant on the feasible set (exact): {'yes' if result.exact_constant else 'no'}")
        print(f"coalition payoff: {before}")
        print(f"best gain: {result.gain}")
        if diff is not None:
            print("changed worths:")
            for t, a, b in diff.changed_worths:
                print(f"  {spec.label(t)}: {a} -> {b}")
            print("changed dividends:")
            for t, a, b in diff.changed_dividends:
                print(f"  {spec.label(t)}: {a} -> {b}")
            print("member payoffs:")
            for i, a, b in diff.payoffs:
                print(f"  {spec.players[i]}: {a} -> {b}")
    return EXIT_VIOLATION if result.gain > 0 else EXIT_OK


# ---------------------------------------------------------------- transform


def cmd_transform(args) -> int:
    spec = gamefile.load(args.file)
    if args.to_dividends:
        v = spec.game()
        out = GameSpec(spec.players, v.dividends().dividends, spec.domain, "dividends")
    elif args.from_dividends:
        if spec.kind != "dividends":
            raise UsageError("--from-dividends needs a file with a 'dividends' key")
        try:
            v = from_dividends(spec.values, spec.n).with_domain(spec.domain)
        except ValueError as exc:
            raise GameFileError(str(exc)) from None
        out = gamefile.spec_for_game(v, spec.players)
    else:
        x = [gamefile.parse_rational(s) for s in args.shift.split(",")]
        if len(x) != spec.n:
            raise UsageError(f"--shift needs {spec.n} values, got {len(x)}")
        out = gamefile.spec_for_game(add_modular(spec.game(), x), spec.players)
    text = gamefile.dumps(out)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- random


def cmd_random(args) -> int:
    n = args.players
    if not 1 <= n <= MAX_PLAYERS:
        raise UsageError(f"--players must lie in 1..{MAX_PLAYERS}")
    if args.count < 1:
        raise UsageError("--count must be positive")
    if args.count > 1 and not args.out_dir:
        raise UsageError("--count above 1 needs --out-dir")
    domain = Domain(args.domain)
    players = gamefile.default_players(n)
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    for k in range(args.count):
        rng = random.Random(f"random/{args.seed}/{n}/{domain.value}/{k}")
        v = random_game(rng, n, domain, args.radius)
        text = gamefile.dumps(gamefile.spec_for_game(v, players))
        if out_dir is None:
            sys.stdout.write(text)
        else:
            path = out_dir / f"game-{args.seed}-{k:03d}.json"
            path.write_text(text, encoding="utf-8")
            print(path)
    return EXIT_OK


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coalaudit", description="Exact coalitional-game toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate an allocation rule on a game file")
    p.add_argument("file")
    _add_rule_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("audit", help="search random games for axiom violations")
    _add_rule_flags(p)
    p.add_argument("--axioms", help="comma-separated axiom ids (default: all)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--players", default="3", help="player count, or a comma-separated list")
    p.add_argument("--domain", choices=[d.value for d in Domain], default="unrestricted")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("manipulate", help="search for a profitable manipulation by a coalition")
    p.add_argument("file")
    p.add_argument("--coalition", required=True, help="comma-separated player names")
    p.add_argument("--mode", default="internal", help="internal, underreport or strong")
    _add_rule_flags(p)
    p.add_argument("--radius", type=int, default=12)
    p.add_argument("--denominator", type=int, default=1)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_manipulate)

    p = sub.add_parser("transform", help="convert between worths and dividends, or shift by a modular game")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--to-dividends", action="store_true")
    g.add_argument("--from-dividends", action="store_true")
    g.add_argument("--shift", help="comma-separated x_i, one per player")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("random", help="generate seeded random game files")
    p.add_argument("--players", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--domain", choices=[d.value for d in Domain], default="unrestricted")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--radius", type=int, default=12)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_random)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GameFileError) as exc:
        print(f"coalaudit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
