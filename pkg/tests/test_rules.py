import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coalaudit.audit import random_game
from coalaudit.game import (
    from_dividends,
    game,
    modular_game,
    null_game,
    submasks,
    unanimity_game,
)
from coalaudit.rules import (
    EQUAL_DIVISION,
    NUCLEOLUS,
    NULL_VALUE,
    PHI_TWO_PLAYER,
    PHI_W,
    SHAPLEY,
    Rule,
    RuleKind,
    coalition_payoff,
    egalitarian_shapley,
    equal_division,
    phi_two_player,
    phi_w,
    shapley,
    shapley_by_marginals,
    shapley_ed_mixture,
    weighted_shapley,
)

from conftest import SE
from oracles import shapley_by_permutations
from strategies import games

F = Fraction


def test_shapley_on_the_figures(fig):
    assert shapley(fig["fig1a"]) == (9, 36, 9)
    assert shapley(fig["fig1b"]) == (9, 30, 15)
    assert shapley(fig["fig1c"]) == (7, 34, 13)
    assert shapley(fig["fig2b"]) == (11, 35, 8)


def test_shapley_of_unanimity_games():
    assert shapley(unanimity_game(0b0110, 4)) == (0, F(1, 2), F(1, 2), 0)


def test_equal_division():
    assert equal_division(game(3, [0, 5, 20, 25, -10, 1, 40, 54])) == (18, 18, 18)
    assert equal_division(null_game(3)) == (0, 0, 0)
    assert equal_division(unanimity_game(7, 3).scale(5)) == (F(5, 3),) * 3


def test_weighted_shapley(fig):
    assert weighted_shapley(fig["fig1a"], (2, 2, 2)) == (9, 36, 9)
    assert weighted_shapley(unanimity_game(0b011, 3), (1, 3, 7)) == (F(1, 4), F(3, 4), 0)
    assert weighted_shapley(modular_game((3, -1, 2)), (1, 5, 9)) == (3, -1, 2)
    with pytest.raises(ValueError):
        weighted_shapley(fig["fig1a"], (1, 0, 1))
    with pytest.raises(ValueError):
        Rule(RuleKind.WEIGHTED_SHAPLEY, weights=(1, -1, 1))


def test_egalitarian_family(fig):
    v = fig["fig1a"]
    assert egalitarian_shapley(v, 1) == shapley(v)
    assert egalitarian_shapley(v, 0) == equal_division(v)
    assert egalitarian_shapley(v, F(1, 2)) == (F(27, 2), 27, F(27, 2))
    assert shapley_ed_mixture(v, 2) == (0, 54, 0)
    with pytest.raises(ValueError):
        egalitarian_shapley(v, F(3, 2))
    with pytest.raises(ValueError):
        Rule(RuleKind.EGALITARIAN_SHAPLEY, alpha=-1)


def test_null_value(fig):
    assert NULL_VALUE(fig["fig1a"]) == (0, 0, 0)
    assert sum(NULL_VALUE(fig["fig1a"])) != fig["fig1a"][7]


def test_phi_two_player():
    assert phi_two_player(game(2, [0, 0, 0, 10])) == (5, 5)
    assert phi_two_player(game(2, [0, 3, 1, 10])) == (9, 1)
    assert phi_two_player(game(2, [0, 1, 3, 10])) == (1, 9)
    with pytest.raises(ValueError):
        phi_two_player(null_game(3))


def test_phi_w(fig):
    v = fig["fig1a"]
    assert v.dividends()[7] == 3
    assert phi_w(v) == (F(144, 17), F(630, 17), F(144, 17))
    assert phi_w(unanimity_game(7, 3)) == (F(1, 3),) * 3
    negative = from_dividends([0, 1, 2, 0, 3, 0, 0, -1], 3)
    assert phi_w(negative) == shapley(negative)


def test_coalition_payoff(fig):
    sh = shapley(fig["fig1a"])
    assert coalition_payoff(sh, SE) == 45
    assert coalition_payoff(sh, 0) == 0
    assert coalition_payoff(sh, 7) == 54


def test_rule_parsing():
    assert Rule.parse("shapley") == SHAPLEY
    assert Rule.parse("ED") == EQUAL_DIVISION
    assert Rule.parse("weighted-shapley:1,2,1").weights == (1, 2, 1)
    assert Rule.parse("egalitarian:1/2").alpha == F(1, 2)
    assert Rule.parse("mixture:2").kind is RuleKind.SHAPLEY_ED_MIXTURE
    assert Rule.parse("prenucleolus") == NUCLEOLUS
    assert Rule.parse("phi2") == PHI_TWO_PLAYER and Rule.parse("phiw") == PHI_W
    for bad in ("banzhaf", "shapley:3", "egalitarian", "egalitarian:2"):
        with pytest.raises(ValueError):
            Rule.parse(bad)


def test_default_weights_are_unequal():
    w = Rule.parse("weighted-shapley").weights_for(3)
    assert w == (1, 2, 3)


def test_permutation_formula_on_the_figure(fig):
    assert shapley_by_permutations(fig["fig1a"]) == (9, 36, 9)


@settings(max_examples=60, deadline=None)
@given(games(max_n=6))
def test_shapley_formulas_agree(v):
    sh = shapley(v)
    assert sh == shapley_by_marginals(v)
    if v.n <= 5:
        assert sh == shapley_by_permutations(v)
    assert sum(sh) == v[v.grand]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(games(n, n), games(n, n))))
def test_shapley_is_additive(pair):
    v, w = pair
    assert shapley(v + w) == tuple(a + b for a, b in zip(shapley(v), shapley(w)))


def coalition_identity(v, s):
    """Mass of dividends inside ``s`` plus the proportional share of dividends that straddle it."""
    d = v.dividends().dividends
    inside = sum((d[t] for t in submasks(s)), F(0))
    straddling = sum(
        (F(bin(s & r).count("1"), bin(r).count("1")) * d[r] for r in range(1, 1 << v.n) if r & ~s and r & s),
        F(0),
    )
    return inside + straddling


@settings(max_examples=60, deadline=None)
@given(games(max_n=6))
def test_coalition_identity(v):
    sh = shapley(v)
    for s in range(1 << v.n):
        assert coalition_payoff(sh, s) == coalition_identity(v, s)


@settings(max_examples=60, deadline=None)
@given(games(min_n=2, max_n=5), st.lists(st.integers(1, 9), min_size=5, max_size=5))
def test_weighted_shapley_with_equal_weights_is_shapley(v, ws):
    assert weighted_shapley(v, [ws[0]] * v.n) == shapley(v)
    assert sum(weighted_shapley(v, ws[: v.n])) == v[v.grand]


@settings(max_examples=60, deadline=None)
@given(games(min_n=2, max_n=5), st.fractions(0, 1, max_denominator=10))
def test_egalitarian_null_player_payoff(v, alpha):
    # zero out player 0's dividends to make it a null player
    d = [x if not m & 1 else F(0) for m, x in enumerate(v.dividends().dividends)]
    u = from_dividends(d, v.n)
    pay = egalitarian_shapley(u, alpha)
    assert pay[0] == (1 - alpha) * u[u.grand] / u.n
    if u[u.grand] != 0 and alpha != 1:
        assert pay[0] != 0


@settings(max_examples=80, deadline=None)
@given(games(max_n=5))
def test_phi_w_is_efficient(v):
    assert sum(phi_w(v)) == v[v.grand]


def test_rules_on_seeded_games_are_exact():
    rng = random.Random("rules")
    for _ in range(20):
        v = random_game(rng, 4)
        for rule in (SHAPLEY, EQUAL_DIVISION, Rule.parse("weighted"), PHI_W, NUCLEOLUS):
            assert all(isinstance(x, Fraction) for x in rule(v))
