import random
import time

import pytest

from coalaudit.audit import Axiom, ManipulationInstance, check_instance, precondition, random_game
from coalaudit.game import Domain, is_superadditive
from coalaudit.manipulate import (
    Budget,
    ManipulationQuery,
    Mode,
    explain,
    linear_payoff_is_constant,
    optimize,
)
from coalaudit.rules import EQUAL_DIVISION, NUCLEOLUS, NULL_VALUE, SHAPLEY, Rule, coalition_payoff

from conftest import D, DE, E, S, SE


def nucleolus_fixture():
    # pinned by a seed search: the first seed whose game lets {p1, p2} gain under the nucleolus
    return random_game(random.Random("nucleolus-fixture/0"), 4, Domain.SUPERADDITIVE)


def test_internal_reallocation_never_pays_under_shapley(fig):
    q = ManipulationQuery(SHAPLEY, fig["fig1a"], SE, Mode.INTERNAL, Budget(radius=60, denominator=5, samples=20_000))
    start = time.perf_counter()
    r = optimize(q)
    assert time.perf_counter() - start < 5
    assert r.evaluated >= 10_000
    assert r.gain == 0 and r.best_w is None
    assert r.exact_constant is True


def test_strong_reallocation_pays_under_shapley(fig):
    r = optimize(ManipulationQuery(SHAPLEY, fig["fig1a"], SE, Mode.STRONG))
    assert r.gain >= 2
    assert precondition(Axiom.RPLUS, ManipulationInstance(fig["fig1a"], r.best_w, coalition=SE))
    # the lattice contains the figure's rewrite: +12 on {e}, nothing else
    assert fig["fig1c"].worths[E] - fig["fig1a"].worths[E] == 12
    c = check_instance(SHAPLEY, Axiom.RPLUS, ManipulationInstance(fig["fig1a"], fig["fig1c"], coalition=SE))
    assert c.gain == 2 <= r.gain


def test_underreporting_never_pays_under_shapley(fig):
    r = optimize(ManipulationQuery(SHAPLEY, fig["fig2a"], SE, Mode.UNDERREPORT))
    assert r.gain == 0 and r.evaluated == 12


def test_nucleolus_gains_by_internal_reallocation():
    v = nucleolus_fixture()
    r = optimize(ManipulationQuery(NUCLEOLUS, v, 0b0011, Mode.INTERNAL, Budget(samples=300)))
    assert r.gain > 0
    w = r.best_w
    assert is_superadditive(w) and w.domain is Domain.SUPERADDITIVE
    assert precondition(Axiom.R, ManipulationInstance(v, w, coalition=0b0011))
    assert coalition_payoff(NUCLEOLUS(w), 3) - coalition_payoff(NUCLEOLUS(v), 3) == r.gain
    assert r.exact_constant is None


@pytest.mark.parametrize("rule", [SHAPLEY, EQUAL_DIVISION, NUCLEOLUS, NULL_VALUE])
def test_singleton_cannot_reallocate(fig, rule):
    for i in range(3):
        r = optimize(ManipulationQuery(rule, fig["fig1a"], 1 << i, Mode.INTERNAL))
        assert r.gain == 0 and r.best_w is None


def test_optimize_is_deterministic(fig):
    q = ManipulationQuery(NUCLEOLUS, fig["fig1a"], SE, Mode.STRONG, Budget(samples=200, seed=4))
    assert optimize(q) == optimize(q)


def test_underreport_witness_only_lowers_the_coalition(fig):
    r = optimize(ManipulationQuery(Rule.parse("phi-w"), fig["fig1a"], SE, Mode.UNDERREPORT, Budget(radius=40)))
    if r.best_w is not None:
        changed = [m for m in range(8) if r.best_w[m] != fig["fig1a"][m]]
        assert changed == [SE] and r.best_w[SE] < fig["fig1a"][SE]


def test_linear_exact_criterion():
    assert linear_payoff_is_constant(SHAPLEY, 3, SE)
    assert linear_payoff_is_constant(Rule.parse("weighted"), 4, 0b0111)
    assert linear_payoff_is_constant(EQUAL_DIVISION, 3, SE)
    with pytest.raises(ValueError):
        linear_payoff_is_constant(NUCLEOLUS, 3, SE)


def test_superadditive_search_rejects_rather_than_repairs():
    v = nucleolus_fixture()
    r = optimize(ManipulationQuery(SHAPLEY, v, 0b0110, Mode.STRONG, Budget(samples=200)))
    assert r.rejected > 0
    assert r.best_w is None or is_superadditive(r.best_w)


def test_query_validation(fig):
    with pytest.raises(ValueError):
        ManipulationQuery(SHAPLEY, fig["fig1a"], 0, Mode.INTERNAL)
    with pytest.raises(ValueError):
        ManipulationQuery(SHAPLEY, fig["fig1a"], 8, Mode.INTERNAL)
    with pytest.raises(ValueError):
        Budget(radius=0)
    assert Mode.parse("R+") is Mode.STRONG and Mode.parse("underreport") is Mode.UNDERREPORT


def test_explain_figure_diffs(fig):
    d = explain(fig["fig1a"], fig["fig1b"], SE, Mode.INTERNAL, SHAPLEY)
    assert [t for t, _, _ in d.changed_worths] == [E, DE]
    assert d.protected_changes == ()
    assert d.payoffs == ((1, 36, 30), (2, 9, 15))
    assert explain(fig["fig1a"], fig["fig1a"], SE, Mode.INTERNAL).empty
    u = explain(fig["fig2a"], fig["fig2b"], SE, Mode.UNDERREPORT)
    assert [t for t, _, _ in u.changed_worths] == [SE]
    assert u.changed_worths[0][1:] == (40, 34)
    assert u.protected_changes == ()
    # the strong rewrite touches nothing protected either; changing {d} would
    assert explain(fig["fig1a"], fig["fig1c"], SE, Mode.STRONG).protected_changes == ()
    touched = fig["fig1a"].with_worth(D, 6)
    assert explain(fig["fig1a"], touched, SE, Mode.STRONG).protected_changes == (D,)
    assert S not in [t for t, _, _ in d.changed_worths]
