from pathlib import Path

import pytest

from coalaudit import gamefile

GAMES = Path(__file__).resolve().parent.parent / "games"

# players d, s, e are bits 0, 1, 2
D, S, E = 1, 2, 4
SE, DE, DS, DSE = S | E, D | E, D | S, D | S | E


def load_fig(name: str):
    return gamefile.load(GAMES / f"{name}.json").game()


@pytest.fixture(scope="session")
def fig():
    return {name: load_fig(name) for name in ("fig1a", "fig1b", "fig1c", "fig2a", "fig2b")}
