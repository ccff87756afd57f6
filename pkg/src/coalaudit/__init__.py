"""Exact TU coalitional games: allocation rules, axiom audits and manipulation search."""

from .game import (
    CoalitionalGame,
    DividendVector,
    Domain,
    add_modular,
    from_dividends,
    game,
    is_superadditive,
    null_game,
    unanimity_game,
)
from .rules import Rule, RuleKind, coalition_payoff

__all__ = [
    "CoalitionalGame",
    "DividendVector",
    "Domain",
    "Rule",
    "RuleKind",
    "add_modular",
    "coalition_payoff",
    "from_dividends",
    "game",
    "is_superadditive",
    "null_game",
    "unanimity_game",
]
__version__ = "0.1.0"
