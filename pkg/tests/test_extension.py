"""Extension families: the two directions of the law/family correspondence,
the numbered conditions with their co-occurrence table, the whiskering
equivalences, and the lax-extension axioms, over small exhaustive universes."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from laxdist.carriers import ElementBudget, discrete, set_over
from laxdist.distlaw import (beta_law, check_law, delta_law, identity_law,
                             tensor_law)
from laxdist.extension import (builtin_families, check_extension_conditions,
                               check_lax_extension, check_prop64,
                               identity_extension, phi, psi, top_law)
from laxdist.monads import universe_elements
from laxdist.presheaf import PresheafCarrier, build_px, counit_rel, p_leq
from laxdist.qrel import (QRel, all_relations, rel_compose, rel_leq,
                          sample_relation)
from laxdist.quantaloid import builtin_quantale, d2
from laxdist.report import FAIL, SKIPPED, BudgetError, SchemaError

TWO = builtin_quantale("two")
D2 = d2()
B = ElementBudget()


def sizes(q=TWO):
    return [discrete(q, ["a"]), discrete(q, ["a", "b"])]


def corpus():
    return {f.name: f for f in builtin_families()}


def rel_grid(q, X, Y, ones):
    return QRel(q, X, Y, {pair: "1" for pair in ones})


# --- phi -----------------------------------------------------------------


def test_phi_of_identity_law_is_identity():
    fam = phi(identity_law(TWO))
    X, Y = sizes()
    for rel in all_relations(TWO, Y, Y):
        assert fam.assign(rel).entries == rel.entries


def test_phi_list_matches_tensorwise_oracle():
    """Over the free-monoid monad the induced family is the graded tensor:
    bottom on length mismatch, the product of entries otherwise."""
    fam = phi(tensor_law(TWO))
    X = discrete(TWO, ["a", "b"])
    Y = discrete(TWO, ["u", "v"])
    tx, ty = fam.t_of(X.as_set()), fam.t_of(Y.as_set())
    for rel in all_relations(TWO, X, Y):
        got = fam.assign(rel)
        for xt in tx.all():
            for yt in ty.all():
                if len(xt) != len(yt):
                    want = "0"
                elif all(rel.at(x, y) == "1" for x, y in zip(xt, yt)):
                    want = "1"
                else:
                    want = "0"
                assert got.at(xt, yt) == want, (rel, xt, yt)


def test_phi_over_d2_graded_tensor():
    """With arrays in the diagonal quantaloid the graded tensor also moves
    the arrays: the value at a pair of tuples is an arrow between the
    tensors of the member arrays."""
    fam = phi(tensor_law(D2))
    X = set_over(D2, [("x", "0"), ("y", "1")])
    Y = set_over(D2, [("p", "1"), ("q", "1")])
    tx, ty = fam.t_of(X.as_set()), fam.t_of(Y.as_set())
    for rel in all_relations(D2, X, Y):
        got = fam.assign(rel)
        for xt in tx.all():
            for yt in ty.all():
                if len(xt) != len(yt):
                    want = "0"
                elif all(rel.at(x, y) == "1" for x, y in zip(xt, yt)):
                    want = "1"   # includes the empty tuples: unit arrow
                else:
                    want = "0"
                assert got.at(xt, yt) == want
    # boundary sanity: the empty pair sits at the unit object
    assert tx.array_of(()) == "1"


def test_family_boundary_validation():
    bad = identity_extension(TWO)
    X = discrete(TWO, ["a"]).as_set()
    Y = discrete(TWO, ["a", "b"]).as_set()
    bad._fn = lambda rel, txs, tys: QRel(TWO, tys, tys, {})
    with pytest.raises(SchemaError):
        bad.assign(QRel(TWO, X, Y, {}))


# --- psi -----------------------------------------------------------------


def test_psi_of_identity_extension_is_identity_law():
    law = psi(identity_extension(TWO))
    X = discrete(TWO, ["a", "b"])
    for sigma in build_px(TWO, X).all():
        assert law.apply(X, sigma) == sigma


def test_psi_then_phi_recovers_builtin_laws():
    """Distilling the induced family gives back the law, pointwise on every
    enumerable collection of presheaves."""
    for law in (identity_law(TWO), tensor_law(TWO), delta_law(TWO),
                beta_law(TWO)):
        distilled = psi(phi(law))
        for X in sizes():
            tx = law.monad.carrier(X, B).as_set()
            tpx = law.monad.carrier(PresheafCarrier(TWO, X.as_set()), B)
            els, _, _, _ = universe_elements(tpx, B, salt=3)
            for z in els:
                a, b = law.apply(X, z, B), distilled.apply(X, z, B)
                assert p_leq(TWO, tx, a, b) and p_leq(TWO, tx, b, a), \
                    (law.name, z)


def test_phi_of_psi_recovers_condition0_families():
    """Families satisfying the op-whiskering equality are recovered from
    their distilled law; the planted violators are not."""
    fams = corpus()
    X, Y = [c.as_set() for c in sizes()]
    test_rels = list(all_relations(TWO, Y, Y)) + \
        [counit_rel(TWO, Y, PresheafCarrier(TWO, Y))]
    for name in ("identity", "top", "bottom", "column-join", "source-twist",
                 "column-meet"):
        fam = fams[name]
        rebuilt = phi(psi(fam))
        for rel in test_rels:
            assert rebuilt.assign(rel) == fam.assign(rel), (name, rel)
    for name in ("row-join", "ceiling"):
        fam = fams[name]
        rebuilt = phi(psi(fam))
        assert any(rebuilt.assign(rel) != fam.assign(rel)
                   for rel in test_rels), name


def test_psi_refuses_oversized_presheaf_carriers():
    fam = identity_extension(TWO)
    big = discrete(TWO, [f"x{i}" for i in range(13)])
    with pytest.raises(BudgetError):
        psi(fam).at(big, B)


# --- condition checks on single families ----------------------------------


def test_delta_family_passes_everything():
    rep = check_extension_conditions(phi(delta_law(TWO)), law=delta_law(TWO),
                                     universe=sizes())
    assert rep.ok
    v = rep.meta["verdicts"]
    assert all(v["family"][k] for k in v["family"])
    assert v["table_applicable"]
    # unit laxness on the law side shows up as laxness of the cograph rows
    assert v["law_strict"]["b"] is False
    assert v["family_strict"]["(2)"] is False


def test_zero_violator_detected_with_witness():
    rep = check_extension_conditions(corpus()["row-join"], universe=sizes())
    it = rep.item("(0) op-whiskering equality")
    assert it.status == FAIL and it.witness is not None
    assert rep.item("rebuild through distilled law matches (0)").ok
    assert all(t.status == SKIPPED for t in rep.items
               if t.name.startswith("table"))


def test_column_join_fails_exactly_composition():
    rep = check_extension_conditions(corpus()["column-join"],
                                     universe=sizes())
    v = rep.meta["verdicts"]["family"]
    assert v["(3)"] is False and v["(3')"] is False
    assert all(v[k] for k in v if k not in ("(3)", "(3')"))
    assert rep.meta["verdicts"]["law"]["c"] is False
    assert all(t.ok for t in rep.items if t.name.startswith("table"))


def test_bottom_fails_both_unit_conditions():
    rep = check_extension_conditions(corpus()["bottom"], universe=sizes())
    v = rep.meta["verdicts"]
    assert v["family"]["(2)"] is False and v["family"]["(2')"] is False
    assert v["law"]["b"] is False and v["law"]["d"] is False
    assert all(t.ok for t in rep.items if t.name.startswith("table"))


def test_identity_extension_all_strict():
    rep = check_lax_extension(identity_extension(TWO), universe=sizes())
    assert rep.ok and rep.meta["lax_extension"]
    for it in rep.items:
        if it.strict is not None:
            assert it.strict, it.name


# --- whiskering equivalences ----------------------------------------------


def test_prop64_holds_for_induced_families():
    for law in (identity_law(TWO), tensor_law(TWO)):
        rep = check_prop64(phi(law), universe=sizes())
        p = rep.meta["prop64"]
        assert p == {"tested": True, "i": True, "ii": True, "iii": True}
        assert rep.item("all-or-none agreement").ok


def test_prop64_violator_fails_all_three():
    # bottom breaks the map inequalities of (iii); (i) and (ii) fall with it
    rep = check_prop64(corpus()["bottom"], universe=sizes())
    p = rep.meta["prop64"]
    assert p == {"tested": True, "i": False, "ii": False, "iii": False}
    assert rep.item("all-or-none agreement").ok


def test_prop64_untested_without_precondition():
    rep = check_prop64(corpus()["column-join"], universe=sizes())
    assert rep.meta["prop64"] == {"tested": False}
    it = rep.item("all-or-none agreement")
    assert it.status == SKIPPED and "untested" in it.note


# --- corpus-wide agreement -------------------------------------------------


def test_corpus_tables_have_no_discrepancies():
    U = sizes()
    laws = {"induced(identity)": identity_law(TWO),
            "induced(everywhere-top)": top_law(TWO),
            "induced(tensor)": tensor_law(TWO),
            "induced(delta)": delta_law(TWO),
            "induced(beta)": beta_law(TWO)}
    seen_fail = set()
    for fam in builtin_families():
        rep = check_extension_conditions(fam, law=laws.get(fam.name),
                                         universe=U)
        for it in rep.items:
            assert it.status != FAIL or not it.name.startswith("table"), \
                (fam.name, it.name)
            if it.status == FAIL:
                seen_fail.add(it.name.split(" ")[0])
        assert rep.item("rebuild through distilled law matches (0)").ok, \
            fam.name
    # every numbered condition is broken somewhere in the corpus
    assert {"(0)", "(1)", "(2)", "(2')", "(3)", "(3')", "(4)",
            "(5)"} <= seen_fail


def test_corpus_axiom_and_condition_forms_agree():
    for fam in builtin_families():
        rep = check_lax_extension(fam, universe=sizes())
        assert rep.item("axiom form agrees with condition form").ok, fam.name
        lax = rep.meta["lax_extension"]
        expect = fam.name in ("identity", "top", "induced(identity)",
                              "induced(everywhere-top)", "induced(tensor)",
                              "induced(delta)", "induced(beta)")
        assert lax == expect, fam.name


def test_reports_are_deterministic():
    def run():
        rep = check_extension_conditions(corpus()["column-meet"],
                                         universe=sizes())
        return rep.to_json()
    assert run() == run()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_induced_families_are_monotone(data):
    X = discrete(TWO, ["a", "b"])
    seed = data.draw(st.integers(0, 10 ** 6))
    rng = random.Random(seed)
    fam = phi(delta_law(TWO))
    r1 = sample_relation(TWO, X, X, rng)
    r2 = sample_relation(TWO, X, X, rng)
    if not rel_leq(r1, r2):
        r2 = QRel(TWO, X, X, {**r1.entries, **r2.entries})
    assert rel_leq(fam.assign(r1), fam.assign(r2))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_induced_families_compose_laxly(data):
    X = discrete(TWO, ["a", "b"])
    seed = data.draw(st.integers(0, 10 ** 6))
    rng = random.Random(seed)
    fam = phi(tensor_law(TWO))
    r1 = sample_relation(TWO, X, X, rng)
    r2 = sample_relation(TWO, X, X, rng)
    lhs = rel_compose(fam.assign(r2), fam.assign(r1))
    rhs = fam.assign(rel_compose(r2, r1))
    assert rel_leq(lhs, rhs)
