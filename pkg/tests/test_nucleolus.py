import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coalaudit import lp
from coalaudit.audit import random_game
from coalaudit.game import Domain, game, game_from_function, popcount, unanimity_game
from coalaudit.nucleolus import least_core_program, prenucleolus
from coalaudit.rules import equal_division, nucleolus, shapley

from nucleolus_oracle import grid_nucleolus, kohlberg_balanced
from strategies import games

F = Fraction


def oracle_games(count=20):
    out = []
    for k in range(count):
        rng = random.Random(f"nucleolus-oracle/{k}")
        domain = Domain.SUPERADDITIVE if k % 3 == 0 else Domain.UNRESTRICTED
        out.append(random_game(rng, 3 + k % 2, domain, radius=12 + k))
    return out


def test_first_figure_against_grid_oracle(fig):
    v = fig["fig1a"]
    x = nucleolus(v)
    assert x == (F(19, 2), F(73, 2), F(8))
    g, step = grid_nucleolus(v)
    assert max(abs(float(a) - b) for a, b in zip(x, g)) <= 1e-9 + step
    assert kohlberg_balanced(v, x)


@pytest.mark.parametrize("v", oracle_games(), ids=lambda v: f"n{v.n}")
def test_random_games_against_grid_oracle(v):
    x = nucleolus(v)
    g, step = grid_nucleolus(v)
    assert step < 1e-10
    assert max(abs(float(a) - b) for a, b in zip(x, g)) <= 1e-9 + step
    assert kohlberg_balanced(v, x)


def test_kohlberg_check_rejects_other_allocations(fig):
    v = fig["fig1a"]
    assert not kohlberg_balanced(v, shapley(v))
    assert not kohlberg_balanced(v, equal_division(v))


def test_two_player_standard_solution():
    for v1, v2, v12 in [(0, 0, 10), (3, 1, 10), (-4, 7, 1), (5, 5, 0)]:
        surplus = F(v12 - v1 - v2)
        assert nucleolus(game(2, [0, v1, v2, v12])) == (v1 + surplus / 2, v2 + surplus / 2)


def test_one_player():
    assert nucleolus(game(1, [0, 7])) == (7,)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.lists(st.integers(-10, 10), min_size=5, max_size=5))
def test_symmetric_games_get_equal_division(n, by_size):
    v = game_from_function(n, lambda m: by_size[popcount(m) - 1] if m else 0)
    assert nucleolus(v) == equal_division(v) == shapley(v)


@settings(max_examples=60, deadline=None)
@given(games(min_n=2, max_n=4))
def test_efficient_and_balanced(v):
    x = nucleolus(v)
    assert sum(x) == v[v.grand]
    assert kohlberg_balanced(v, x)


def test_first_round_is_the_least_core(fig):
    v = fig["fig1a"]
    out = lp.solve(least_core_program(v, list(range(1, 7)), {}))
    assert out.optimal
    x = nucleolus(v)
    # the prenucleolus attains the least-core value
    assert max(v[m] - sum(x[i] for i in range(3) if m >> i & 1) for m in range(1, 7)) == out.value


def test_degenerate_unanimity_games():
    for t in range(1, 16):
        u = unanimity_game(t, 4)
        x = prenucleolus(u)
        assert sum(x) == 1
        assert kohlberg_balanced(u, x)
