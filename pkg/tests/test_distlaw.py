"""Distributive laws: builtin evaluators against hand oracles, the axiom
checker with strictness flags, and the maximality test."""

import itertools

import pytest

from laxdist.carriers import ElementBudget, discrete, set_over
from laxdist.distlaw import (DistLaw, builtin_law, check_law, delta_law,
                             is_maximal)
from laxdist.monads import Ultra
from laxdist.presheaf import make_presheaf, value
from laxdist.quantaloid import builtin_quantale, d2, diagonal, free_monoid
from laxdist.report import FAIL, SchemaError, ekey

TWO = builtin_quantale("two")
LUK2 = builtin_quantale("luk", 2)
D2 = d2()
DL3 = diagonal(builtin_quantale("luk", 3))
B = ElementBudget()


def subset_presheaf(q, X, xs):
    o = q.star
    return make_presheaf(q, X.array_of, o, [(x, "1") for x in xs])


def two_sizes(q=TWO):
    return [discrete(q, ["a"]), discrete(q, ["a", "b"])]


def test_identity_law_all_strict():
    law = builtin_law("identity", TWO)
    rep = check_law(law, two_sizes(), budget=B)
    assert rep.ok, rep.summary()
    assert set(rep.meta["strict_at"]) == set("abcde")
    assert rep.item("claimed strictness").ok


def test_identity_law_over_d2():
    law = builtin_law("identity", D2)
    X = set_over(D2, [("p", "1"), ("q", "0")])
    rep = check_law(law, [X], budget=B)
    assert rep.ok, rep.summary()
    assert set(rep.meta["strict_at"]) == set("abcde")


def test_tensor_hand_oracle_over_two():
    law = builtin_law("tensor", TWO)
    X = discrete(TWO, ["a", "b"])
    s1 = subset_presheaf(TWO, X, ["a"])
    s2 = subset_presheaf(TWO, X, ["a", "b"])
    out = law.apply(X, (s1, s2), B)
    assert dict(out.entries) == {("a", "a"): "1", ("a", "b"): "1"}
    assert dict(law.apply(X, (), B).entries) == {(): "1"}
    assert dict(law.apply(X, (s2,), B).entries) == {("a",): "1", ("b",): "1"}


def test_tensor_strict_over_two():
    law = builtin_law("tensor", TWO)
    rep = check_law(law, two_sizes(), budget=B)
    assert rep.ok, rep.summary()
    assert set(rep.meta["strict_at"]) == set("abcde")
    assert rep.item("claimed strictness").ok


def test_tensor_over_diagonal_luk3():
    law = builtin_law("tensor", DL3)
    X = set_over(DL3, [("p", "3"), ("q", "2")])
    s1 = make_presheaf(DL3, X.array_of, "2", [("p", "2"), ("q", "1")])
    s2 = make_presheaf(DL3, X.array_of, "3", [("q", "2")])
    out = law.apply(X, (s1, s2), B)
    # codomain folds by the Lukasiewicz tensor, 2 (x) 3 = 2
    assert out.codomain == "2"
    assert dict(out.entries) == {("p", "q"): "1"}  # 2 (x) 2 = 1; 1 (x) 2 = 0
    carriers = [set_over(DL3, [("p", "3")]), X]
    rep = check_law(law, carriers, budget=B)
    assert rep.ok, rep.summary()
    assert set(rep.meta["strict_at"]) == set("abcde")


def test_tensor_refuses_noncommutative():
    m = {}
    for a in ["e", "a", "b"]:
        m[("e", a)] = a
        m[(a, "e")] = a
    for a in ["a", "b"]:
        for b in ["a", "b"]:
            m[(a, b)] = a  # left projection: associative, not commutative
    q = free_monoid(["e", "a", "b"], m, "e")
    with pytest.raises(SchemaError, match="commutative"):
        builtin_law("tensor", q)


def test_delta_boolean_oracle():
    law = builtin_law("delta", TWO)
    X = discrete(TWO, ["a", "b"])
    for supp1 in [[], ["a"], ["a", "b"]]:
        for supp2 in [[], ["b"]]:
            F = frozenset([subset_presheaf(TWO, X, supp1),
                           subset_presheaf(TWO, X, supp2)])
            union = set(supp1) | set(supp2)
            out = law.apply(X, F, B)
            for k in range(3):
                for combo in itertools.combinations(["a", "b"], k):
                    want = "1" if set(combo) <= union else "0"
                    got = out.at(frozenset(combo)) or "0"
                    assert got == want, (supp1, supp2, combo)


def test_delta_empty_family_keeps_top_at_empty_set():
    law = builtin_law("delta", TWO)
    X = discrete(TWO, ["a"])
    out = law.apply(X, frozenset(), B)
    assert dict(out.entries) == {frozenset(): "1"}


def test_delta_law_lax_but_valid():
    rep = check_law(builtin_law("delta", TWO), two_sizes(), budget=B)
    assert rep.ok, rep.summary()
    assert "b" not in rep.meta["strict_at"]
    assert rep.item("claimed strictness").ok


def test_delta_over_luk2():
    rep = check_law(builtin_law("delta", LUK2), two_sizes(LUK2), budget=B)
    assert rep.ok, rep.summary()


def _joined_delta(q, keep_empty_top):
    """The family law with its inner meet replaced by a join.

    keep_empty_top controls the entry at the empty subset: the empty meet
    is top, the empty join is bottom (so the literal swap drops it).
    """
    good = delta_law(q)
    o = q.star
    lat = q.hom(o, o)

    def component(X, TX):
        def ev(F):
            g = {}
            for s in F:
                for x, val in s.entries:
                    g[x] = val if x not in g else q.join(o, o, g[x], val)
            pts = sorted(g, key=ekey)
            items = [(frozenset(), lat.top)] if keep_empty_top else []
            for k in range(1, len(pts) + 1):
                for combo in itertools.combinations(pts, k):
                    j = lat.bottom
                    for x in combo:
                        j = lat.join(j, g[x])
                    items.append((frozenset(combo), j))
            return make_presheaf(q, TX.array_of, o, items)
        return ev

    return DistLaw("delta-joined", q, good.monad, component, frozenset())


def test_corrupted_delta_fails_presheaf_multiplication():
    # On a graded chain the swap shows up in composite values: the
    # presheaf multiplication axiom breaks, and so does the monad one.
    bad = _joined_delta(LUK2, keep_empty_top=True)
    rep = check_law(bad, two_sizes(LUK2), budget=B)
    assert not rep.ok
    failed = [it for it in rep.items if it.status == FAIL]
    assert any(it.name.startswith("(c)") for it in failed)
    assert any(it.name.startswith("(e)") for it in failed)
    assert all(it.witness for it in failed)
    for prefix in ("(a)", "(b)", "(d)", "monotone", "array"):
        assert not any(it.name.startswith(prefix) for it in failed)


def test_corrupted_delta_over_two_fails_unit():
    # On the 2-chain, meets and joins of non-bottom values agree, so the
    # only trace of the swap is at the empty subset: its entry vanishes
    # and the presheaf unit axiom fails at the empty collection.
    bad = _joined_delta(TWO, keep_empty_top=False)
    rep = check_law(bad, two_sizes(), budget=B)
    assert not rep.ok
    failed = [it for it in rep.items if it.status == FAIL]
    assert failed and all(it.name.startswith("(b)") for it in failed)
    assert all(it.witness for it in failed)


def test_beta_principal_oracle_matches_literal_filters():
    law = builtin_law("beta", TWO)
    X = discrete(TWO, ["a", "b"])
    lat = TWO.hom("*", "*")
    pxs = [subset_presheaf(TWO, X, s)
           for s in [[], ["a"], ["b"], ["a", "b"]]]
    for s0 in pxs:
        out = law.apply(X, Ultra(s0), B)
        for x in X.all():
            # literal double meet-join over explicit finite filters
            lit = lat.top
            for A in Ultra(x).members(list(X.all())):
                for C in Ultra(s0).members(pxs):
                    j = lat.bottom
                    for y in A:
                        for s in C:
                            j = lat.join(j, value(TWO, X, s, y))
                    lit = lat.meet(lit, j)
            assert (out.at(Ultra(x)) or lat.bottom) == lit
            assert lit == value(TWO, X, s0, x)


def test_beta_law_valid_and_strict_on_finite_chains():
    rep = check_law(builtin_law("beta", TWO), two_sizes(), budget=B)
    assert rep.ok, rep.summary()
    # principality collapses the formula, so every axiom lands on equality
    assert set(rep.meta["strict_at"]) == set("abcde")
    assert rep.item("claimed strictness").ok
    rep2 = check_law(builtin_law("beta", LUK2), two_sizes(LUK2), budget=B)
    assert rep2.ok, rep2.summary()


def test_beta_guards():
    from laxdist.quantaloid import z2_free_monoid
    with pytest.raises(SchemaError, match="chain"):
        builtin_law("beta", z2_free_monoid())
    with pytest.raises(SchemaError, match="one-object"):
        builtin_law("beta", D2)
    with pytest.raises(SchemaError):
        builtin_law("no-such-law", TWO)


def test_array_preservation_violation_detected():
    lawful = builtin_law("identity", D2)

    def component(X, TX):
        def ev(z):
            if z.codomain == "1":
                return z
            return make_presheaf(D2, TX.array_of, "1", [])
        return ev

    bad = DistLaw("cod-flipper", D2, lawful.monad, component, frozenset())
    X = set_over(D2, [("p", "1"), ("q", "0")])
    rep = check_law(bad, [X], budget=B)
    assert not rep.ok
    item = rep.item("array preservation @X0")
    assert item.status == FAIL and item.witness


def test_is_maximal_identity_singleton_slice():
    law = builtin_law("identity", TWO)
    assert is_maximal(law, [discrete(TWO, ["a"])], B).ok


def test_is_maximal_fails_for_identity_over_d2():
    law = builtin_law("identity", D2)
    X = set_over(D2, [("p", "1"), ("q", "1")])
    rep = is_maximal(law, [X], B)
    assert not rep.ok
    assert rep.items[0].witness and "at" in rep.items[0].witness


def test_is_maximal_delta_empty_slice_only():
    law = builtin_law("delta", TWO)
    assert is_maximal(law, [discrete(TWO, [])], B).ok
    rep = is_maximal(law, [discrete(TWO, ["a"])], B)
    assert not rep.ok and rep.items[0].witness


def test_is_maximal_fails_for_tensor_at_two_points():
    law = builtin_law("tensor", TWO)
    rep = is_maximal(law, [discrete(TWO, ["a", "b"])], B)
    assert not rep.ok


def test_law_reports_deterministic():
    law = builtin_law("delta", LUK2)
    X = discrete(LUK2, ["a", "b", "c"])
    r1 = check_law(law, [X], budget=B).to_json()
    r2 = check_law(law, [X], budget=B).to_json()
    assert r1 == r2
