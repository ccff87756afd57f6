from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coalaudit.game import (
    CoalitionalGame,
    Domain,
    add_modular,
    are_symmetric,
    as_fraction,
    from_dividends,
    game,
    game_from_function,
    is_null_player,
    is_superadditive,
    members,
    mobius,
    modular_game,
    null_game,
    popcount,
    required_players,
    submasks,
    superadditivity_witness,
    support_count,
    unanimity_game,
    zeta,
)

from conftest import D, DE, DS, DSE, E, S, SE
from oracles import dividends_by_recursion, superadditive_brute
from strategies import games, rationals, superadditive_games


def test_worths_of_first_figure(fig):
    v = fig["fig1a"]
    assert v.worth(E) == -10
    assert v.worth(SE) == 40
    assert v.worth(DE) == 1
    assert v.worth(DSE) == 54
    assert v.worth(0) == 0


def test_worth_rejects_foreign_coalition(fig):
    with pytest.raises(ValueError):
        fig["fig1a"].worth(8)


def test_marginal_contributions(fig):
    v = fig["fig1a"]
    assert v.marginal_contribution(0, SE) == 14
    assert v.marginal_contribution(2, 0) == -10
    assert all(null_game(3).marginal_contribution(i, 0) == 0 for i in range(3))
    with pytest.raises(ValueError):
        v.marginal_contribution(1, SE)


def test_dividends_by_hand(fig):
    d = fig["fig1a"].dividends()
    assert d[SE] == 30
    assert d[DE] == 6
    assert d[DS] == 0
    assert d[DSE] == 3
    assert from_dividends(d) == fig["fig1a"]


def test_unanimity_games():
    u = unanimity_game(0b001, 3)
    assert [m for m in range(8) if u[m] == 1] == [0b001, 0b011, 0b101, 0b111]
    uN = unanimity_game(0b111, 3)
    assert uN[0b111] == 1 and all(uN[m] == 0 for m in range(7))
    for t in range(1, 8):
        assert unanimity_game(t, 3).dividends().support() == [t]
        assert is_superadditive(unanimity_game(t, 3))
    with pytest.raises(ValueError):
        unanimity_game(0, 3)


def test_from_dividends_examples():
    assert from_dividends([0] * 8, 3) == null_game(3)
    assert from_dividends([0] * 7 + [1], 3) == unanimity_game(7, 3)
    with pytest.raises(ValueError):
        from_dividends([1] + [0] * 7, 3)


def test_modular_game_dividends():
    x = (Fraction(2), Fraction(-3), Fraction(5, 2))
    d = modular_game(x).dividends()
    assert [d[1 << i] for i in range(3)] == list(x)
    assert all(d[m] == 0 for m in range(8) if popcount(m) >= 2)


def test_construction_guards():
    with pytest.raises(ValueError):
        game(2, [1, 0, 0, 0])
    with pytest.raises(ValueError):
        game(2, [0, 0, 0])
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(ValueError):
        game(2, [0, 1, 0, 0], Domain.SUPERADDITIVE)
    with pytest.raises(ValueError):
        CoalitionalGame(17, ())


def test_superadditivity_examples(fig):
    assert is_superadditive(fig["fig1a"])
    bad = game(2, [0, 1, 0, 0])
    assert superadditivity_witness(bad) == (0b01, 0b10)
    assert not is_superadditive(bad)


def test_symmetry_and_null_players(fig):
    v = fig["fig1a"]
    assert not are_symmetric(v, 0, 1)
    assert not is_null_player(v, 2)
    assert are_symmetric(null_game(3), 0, 2)
    assert is_null_player(null_game(3), 1)
    sym = game_from_function(4, lambda m: popcount(m) ** 2 - 1 if m else 0)
    assert all(are_symmetric(sym, i, j) for i in range(4) for j in range(4) if i != j)
    u = unanimity_game(0b011, 3)
    assert is_null_player(u, 2) and not is_null_player(u, 0)
    with pytest.raises(ValueError):
        are_symmetric(v, 1, 1)


def test_support_and_required_players():
    assert support_count(null_game(3)) == 0
    assert required_players(null_game(3)) == 0b111
    lam = unanimity_game(0b111, 3).scale(Fraction(-7, 2))
    assert support_count(lam) == 1 and required_players(lam) == 0b111
    mod = modular_game((1, -2, 3))
    assert support_count(mod) == 3 and required_players(mod) == 0
    assert required_players(unanimity_game(0b011, 3) + unanimity_game(0b111, 3)) == 0b011


def test_add_modular_examples(fig):
    v = fig["fig1a"]
    assert add_modular(v, (0, 0, 0)) == v
    assert add_modular(null_game(3), (1, 2, 3)) == modular_game((1, 2, 3))
    with pytest.raises(ValueError):
        add_modular(v, (1, 2))


def test_shift_recipe_for_the_manipulated_figures(fig):
    # crediting e with 12 while keeping v({s,e}) and v(N) rebuilds the internal reallocation
    shifted = add_modular(fig["fig1a"], (0, 0, 12)).with_worth(SE, 40).with_worth(DSE, 54)
    assert shifted == fig["fig1b"]
    # additionally holding v({d,e}) at 1 cuts d's synergy with e: the strong reallocation
    assert shifted.with_worth(DE, 1) == fig["fig1c"]


def test_subset_helpers():
    assert sorted(submasks(0b101)) == [0, 1, 4, 5]
    assert members(0b1011) == [0, 1, 3]


@settings(max_examples=150, deadline=None)
@given(games(max_n=8, values=st.integers(-50, 50)))
def test_round_trip(v):
    assert from_dividends(v.dividends()) == v
    assert zeta(mobius(v.worths, v.n), v.n) == list(v.worths)


@settings(max_examples=150, deadline=None)
@given(games(max_n=6))
def test_fast_transform_matches_recursion(v):
    assert list(v.dividends().dividends) == dividends_by_recursion(v)


@settings(max_examples=100, deadline=None)
@given(superadditive_games(max_n=4), st.lists(rationals, min_size=4, max_size=4))
def test_modular_shift_preserves_superadditivity(v, xs):
    x = xs[: v.n]
    shifted = add_modular(v, x)
    assert is_superadditive(shifted)
    assert shifted.domain is Domain.SUPERADDITIVE
    back = add_modular(shifted, [-a for a in x])
    assert back.worths == v.worths
    d, e = v.dividends().dividends, shifted.dividends().dividends
    for m in range(1, 1 << v.n):
        expected = d[m] + (x[members(m)[0]] if popcount(m) == 1 else 0)
        assert e[m] == expected


@settings(max_examples=100, deadline=None)
@given(games(max_n=4))
def test_modular_shift_preserves_failure_too(v):
    x = [Fraction(k) for k in range(1, v.n + 1)]
    assert is_superadditive(add_modular(v, x)) == is_superadditive(v)


@settings(max_examples=200, deadline=None)
@given(games(max_n=4, values=st.integers(-6, 6)))
def test_superadditivity_matches_brute_force(v):
    assert is_superadditive(v) == superadditive_brute(v)
    w = superadditivity_witness(v)
    if w is not None:
        s, t = w
        assert s & t == 0 and v[s | t] < v[s] + v[t]


@settings(max_examples=100, deadline=None)
@given(games(max_n=4))
def test_required_players_grand_means_grand_support(v):
    if required_players(v) == v.grand:
        assert set(v.dividends().support()) <= {v.grand}
