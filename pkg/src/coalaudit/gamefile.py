"""JSON game files: parsing with located errors, and canonical serialization.

A file names its players and lists worths (or dividends) per coalition::

    {"players": ["d", "s", "e"],
     "worths": [{"coalition": ["s", "e"], "worth": "40"}, ...],
     "domain": "unrestricted"}

Unlisted nonempty coalitions are worth 0. Canonical output lists every nonempty
coalition in bitmask order, members in player order, rationals as ``p/q``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .game import MAX_PLAYERS, CoalitionalGame, Domain, members

_INTEGER = re.compile(r"[+-]?\d+(?:/\d+)?")
_DECIMAL = re.compile(r"[+-]?\d+\.\d{1,12}")


class GameFileError(ValueError):
    pass


def parse_rational(text) -> Fraction:
    """Exact value of ``[sign]int[/int]`` or a decimal with at most 12 fractional digits."""
    if isinstance(text, bool):
        raise GameFileError(f"not a rational literal: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise GameFileError(f"rationals must be strings such as \"7/2\", got {text!r}")
    s = text.strip()
    if _INTEGER.fullmatch(s):
        num, _, den = s.partition("/")
        if den and int(den) == 0:
            raise GameFileError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den) if den else 1)
    if _DECIMAL.fullmatch(s):
        return Fraction(s)
    raise GameFileError(f"not a rational literal: {text!r}")


def format_rational(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class GameSpec:
    """Player names together with a worth table, or a dividend table when ``kind == "dividends"``."""

    players: tuple[str, ...]
    values: tuple[Fraction, ...]
    domain: Domain = Domain.UNRESTRICTED
    kind: str = "worths"

    @property
    def n(self) -> int:
        return len(self.players)

    def game(self) -> CoalitionalGame:
        if self.kind != "worths":
            raise GameFileError("this file holds dividends; convert it with transform --from-dividends")
        try:
            return CoalitionalGame(self.n, self.values, self.domain)
        except ValueError as exc:
            raise GameFileError(str(exc)) from None

    def coalition(self, names: Sequence[str]) -> int:
        return coalition_mask(self.players, names)

    def label(self, mask: int) -> str:
        return "{" + ",".join(self.players[i] for i in members(mask)) + "}"


def coalition_mask(players: Sequence[str], names: Sequence[str], where: str = "coalition") -> int:
    index = {p: i for i, p in enumerate(players)}
    mask = 0
    for name in names:
        if not isinstance(name, str) or name not in index:
            raise GameFileError(f"{where}: unknown player {name!r}")
        bit = 1 << index[name]
        if mask & bit:
            raise GameFileError(f"{where}: player {name!r} listed twice")
        mask |= bit
    return mask


def from_document(doc) -> GameSpec:
    if not isinstance(doc, dict):
        raise GameFileError("a game file must be a JSON object")
    unknown = set(doc) - {"players", "worths", "dividends", "domain"}
    if unknown:
        raise GameFileError(f"unknown keys {sorted(unknown)}")
    players = doc.get("players")
    if not isinstance(players, list) or not players:
        raise GameFileError("'players' must be a nonempty list of names")
    if not all(isinstance(p, str) and p for p in players):
        raise GameFileError("player names must be nonempty strings")
    if len(set(players)) != len(players):
        raise GameFileError("player names must be distinct")
    if len(players) > MAX_PLAYERS:
        raise GameFileError(f"at most {MAX_PLAYERS} players are supported")
    kinds = [k for k in ("worths", "dividends") if k in doc]
    if len(kinds) != 1:
        raise GameFileError("exactly one of 'worths' or 'dividends' must be present")
    kind = kinds[0]
    try:
        domain = Domain(doc.get("domain", "unrestricted"))
    except ValueError:
        raise GameFileError(f"unknown domain {doc.get('domain')!r}") from None
    entries = doc[kind]
    if not isinstance(entries, list):
        raise GameFileError(f"'{kind}' must be a list")
    field = "worth" if kind == "worths" else "dividend"
    values = [Fraction(0)] * (1 << len(players))
    seen: set[int] = set()
    for k, entry in enumerate(entries):
        where = f"{kind}[{k}]"
        if not isinstance(entry, dict) or set(entry) != {"coalition", field}:
            raise GameFileError(f"{where}: expected an object with keys 'coalition' and '{field}'")
        names = entry["coalition"]
        if not isinstance(names, list):
            raise GameFileError(f"{where}: 'coalition' must be a list of player names")
        mask = coalition_mask(players, names, where)
        if mask == 0:
            raise GameFileError(f"{where}: the empty coalition must not appear")
        if mask in seen:
            raise GameFileError(f"{where}: coalition {names} listed twice")
        seen.add(mask)
        try:
            values[mask] = parse_rational(entry[field])
        except GameFileError as exc:
            raise GameFileError(f"{where} (coalition {names}): {exc}") from None
    return GameSpec(tuple(players), tuple(values), domain, kind)


def to_document(spec: GameSpec) -> dict:
    field = "worth" if spec.kind == "worths" else "dividend"
    rows = [
        {"coalition": [spec.players[i] for i in members(mask)], field: format_rational(spec.values[mask])}
        for mask in range(1, 1 << spec.n)
    ]
    return {"players": list(spec.players), spec.kind: rows, "domain": spec.domain.value}


def dumps(spec: GameSpec) -> str:
    return json.dumps(to_document(spec), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> GameSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFileError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_document(doc)


def load(path) -> GameSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise GameFileError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return loads(text)
    except GameFileError as exc:
        raise GameFileError(f"{path}: {exc}") from None


def spec_for_game(v: CoalitionalGame, players: Sequence[str]) -> GameSpec:
    return GameSpec(tuple(players), v.worths, v.domain, "worths")


def default_players(n: int) -> tuple[str, ...]:
    return tuple(f"p{i + 1}" for i in range(n))
