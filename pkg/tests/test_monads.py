"""Set-monads, their liftings, and the weak-pullback check."""

import itertools

import pytest

from laxdist.carriers import ElementBudget, discrete, set_over
from laxdist.monads import (ListMonad, PowersetMonad, TCarrier, Ultra,
                            bc_violator, builtin_monad, can_map, check_BC,
                            check_monad_laws, check_zeta, lift_monad,
                            q0_carrier, standard_zeta)
from laxdist.quantaloid import builtin_quantale, d2, diagonal
from laxdist.report import FAIL, SchemaError

TWO = builtin_quantale("two")
D2 = d2()
BUDGET = ElementBudget()


def test_ultra_reads_as_a_literal_filter():
    ground = ["a", "b", "c"]
    u = Ultra("a")
    members = set(u.members(ground))
    assert members == {frozenset(s) for s in
                       [{"a"}, {"a", "b"}, {"a", "c"}, {"a", "b", "c"}]}
    for k in range(4):
        for combo in itertools.combinations(ground, k):
            a = frozenset(combo)
            assert (a in u) == ("a" in a)
            # ultrafilter dichotomy: exactly one of A, X - A belongs
            assert (a in u) != (frozenset(ground) - a in u)
    # upward closure and binary intersection
    for a in members:
        for b in members:
            assert a & b in members
            assert a | frozenset(["b"]) in u


def test_ultrafilter_monad_is_points_in_disguise():
    m = builtin_monad("ultrafilter")
    xs = ["a", "b", "c"]
    assert m.universe(xs, BUDGET) == [Ultra("a"), Ultra("b"), Ultra("c")]
    assert m.usize(3, BUDGET) == 3
    assert m.unit("b") == Ultra("b")
    f = {"a": 1, "b": 2, "c": 2}
    for x in xs:
        assert m.fmap(f.get, m.unit(x)) == m.unit(f[x])
    assert m.mult(Ultra(Ultra("c"))) == Ultra("c")


def test_list_monad_basics():
    m = builtin_monad("list")
    assert m.unit("a") == ("a",)
    assert m.mult((("a", "b"), (), ("c",))) == ("a", "b", "c")
    assert m.usize(3, BUDGET) == 1 + 3 + 9
    assert len(m.universe(["a", "b"], BUDGET)) == 7


def test_powerset_monad_basics():
    m = builtin_monad("powerset")
    u = m.universe(["a", "b"], BUDGET)
    assert len(u) == 4 and frozenset() in u
    assert m.mult(frozenset([frozenset(["a"]), frozenset(["b", "a"])])) == \
        frozenset(["a", "b"])
    assert m.fmap(str.upper, frozenset(["a", "b"])) == frozenset(["A", "B"])


def test_unknown_monad_refused():
    with pytest.raises(SchemaError):
        builtin_monad("probability")


@pytest.mark.parametrize("name,size", [
    ("identity", 3), ("list", 2), ("powerset", 2), ("ultrafilter", 3)])
def test_monad_laws_over_two(name, size):
    lm = lift_monad(builtin_monad(name), TWO, budget=BUDGET)
    X = discrete(TWO, [f"p{i}" for i in range(size)])
    rep = check_monad_laws(lm, X, BUDGET)
    assert rep.ok, rep.summary()


def test_list_over_diagonal_folds_arrays():
    lm = lift_monad(ListMonad(), D2, budget=BUDGET)
    X = set_over(D2, [("p", "1"), ("q", "0")])
    TX = lm.carrier(X, BUDGET)
    assert TX.array_of(()) == "1"          # empty word sits at the unit
    assert TX.array_of(("p", "p")) == "1"
    assert TX.array_of(("p", "q")) == "0"
    rep = check_monad_laws(lm, X, BUDGET)
    assert rep.ok, rep.summary()


def test_list_over_diagonal_luk3():
    dl3 = diagonal(builtin_quantale("luk", 3))
    lm = lift_monad(ListMonad(), dl3, budget=BUDGET)
    X = set_over(dl3, [("p", "3"), ("q", "2")])
    TX = lm.carrier(X, BUDGET)
    assert TX.array_of(("q", "q")) == "1"  # 2 + 2 - 3 in the Lukasiewicz fold
    assert check_monad_laws(lm, X, BUDGET).ok


def test_bad_zeta_refused_with_witness():
    first_or_unit = lambda t: t[0] if t else "1"
    with pytest.raises(SchemaError, match="associativity"):
        lift_monad(ListMonad(), D2, zeta=first_or_unit, budget=BUDGET)
    rep = check_zeta(ListMonad(), D2, first_or_unit, BUDGET)
    bad = [it for it in rep.items if it.status == FAIL]
    assert bad and bad[0].witness is not None


def test_no_canonical_zeta_for_powerset_over_diagonal():
    with pytest.raises(SchemaError):
        standard_zeta(PowersetMonad(), D2)


def test_corrupted_multiplication_caught():
    class DroppyList(ListMonad):
        def mult(self, tt):
            flat = tuple(x for t in tt for x in t)
            return flat[:1]  # discards everything after the first letter

    lm = lift_monad(builtin_monad("list"), TWO, budget=BUDGET)
    lm = type(lm)(DroppyList(), TWO, lm.zeta, "droppy")
    X = discrete(TWO, ["a", "b"])
    rep = check_monad_laws(lm, X, BUDGET)
    assert not rep.ok
    failed = [it.name for it in rep.items if it.status == FAIL]
    assert "associativity law" in failed or "right unit law" in failed
    assert any(it.witness for it in rep.items if it.status == FAIL)


@pytest.mark.parametrize("name", ["identity", "list", "powerset",
                                  "ultrafilter"])
def test_weak_pullbacks_preserved(name):
    rep = check_BC(builtin_monad(name), BUDGET)
    assert rep.ok, rep.summary()


def test_near_constant_functor_fails_weak_pullbacks():
    rep = check_BC(bc_violator(), BUDGET)
    assert not rep.ok
    w = rep.item("weak pullbacks preserved").witness
    f_targets = {arrow.split("->")[1] for arrow in w["f"].split()}
    g_targets = {arrow.split("->")[1] for arrow in w["g"].split()}
    # the failing square has disjoint images, hence an empty pullback
    assert not f_targets & g_targets
    assert w["u"] == w["v"] == "c1"


def test_can_map_projections():
    m = builtin_monad("list")
    w = (("x1", "y2"), ("x2", "y1"))
    assert can_map(m, w) == (("x1", "x2"), ("y2", "y1"))
    p = builtin_monad("powerset")
    assert can_map(p, frozenset([("a", "b")])) == (frozenset(["a"]),
                                                   frozenset(["b"]))


def test_tcarrier_nesting_and_enumeration():
    lm = lift_monad(builtin_monad("powerset"), TWO, budget=BUDGET)
    X = discrete(TWO, ["a", "b"])
    TX = lm.carrier(X, BUDGET)
    TTX = lm.carrier(TX, BUDGET)
    assert TX.size() == 4 and TTX.size() == 16
    assert TTX.all() == TTX.all()
    assert all(TTX.array_of(t) == "*" for t in TTX.all())
    assert isinstance(TTX, TCarrier) and TTX.total


def test_q0_carrier_shapes():
    c = q0_carrier(D2)
    assert c.all() == ("0", "1")
    assert c.array_of("0") == "0"
    pt = q0_carrier(TWO)
    assert pt.all() == ("*",) and pt.array_of("*") == "*"


def test_list_universe_is_budget_bounded_not_truncated():
    lm = lift_monad(builtin_monad("list"), TWO, budget=BUDGET)
    X = discrete(TWO, ["a"])
    TX = lm.carrier(X, BUDGET)
    assert not TX.total
    long_word = ("a",) * 9
    # elements beyond the enumerated slice are still first-class
    assert TX.array_of(long_word) == "*"
    assert lm.mult((long_word, long_word)) == ("a",) * 18
