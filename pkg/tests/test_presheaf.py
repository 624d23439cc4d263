import itertools
import random

import pytest

from laxdist.carriers import ElementBudget, SetOverQ, discrete, set_over
from laxdist.presheaf import (Presheaf, PresheafCarrier, build_px,
                              check_kleisli_facts, check_presheaf_monad_laws,
                              check_theta_transform, counit_rel, direct_image,
                              inverse_image, kleisli_ext, make_presheaf, mate,
                              mate_map, mult, p_join, p_leq, p_meet, unmate,
                              value, yoneda, yoneda_map)
from laxdist.qrel import (QRel, all_maps, fin_map, rel_compose, rel_leq,
                          sample_relation)
from laxdist.quantaloid import (builtin_quantale, d2, diagonal,
                                globalizations)
from laxdist.report import BudgetError

TWO = builtin_quantale("two")
LUK3 = builtin_quantale("luk", 3)
Z2 = builtin_quantale("free_monoid_z2")
D2 = d2()
BUDGET = ElementBudget()


def subset_presheaf(X, members):
    # over two, presheaves with codomain * are exactly subsets
    return make_presheaf(TWO, X.array_of, "*",
                         [(x, "1") for x in members])


def test_px_sizes_match_the_counting_formula():
    X2 = discrete(TWO, ["a", "b"])
    assert build_px(TWO, X2).size() == 4
    X3 = discrete(LUK3, ["a", "b", "c"])
    assert build_px(LUK3, X3).size() == 64
    mixed = set_over(D2, [("p", "1"), ("q", "0")])
    assert build_px(D2, mixed).size() == 3  # frozen: 1 + 2
    empty = SetOverQ((), ())
    assert PresheafCarrier(TWO, empty).size() == 1
    assert PresheafCarrier(D2, empty).size() == 2


def test_px_budget_violation_raises():
    X = discrete(LUK3, [f"x{i}" for i in range(8)])  # 4^8 = 65536
    with pytest.raises(BudgetError):
        build_px(LUK3, X, limit=4096)


def test_enumeration_is_deterministic():
    X = discrete(LUK3, ["a", "b"])
    first = build_px(LUK3, X).all()
    second = build_px(LUK3, X).all()
    assert first == second
    assert len(set(first)) == len(first)


def test_yoneda_is_an_order_embedding():
    X = set_over(D2, [("p", "1"), ("q", "0")])
    PX = build_px(D2, X)
    for x in X.elements:
        y = yoneda(D2, X, x)
        assert y.codomain == X.array_of(x)
        assert value(D2, X, y, x) == D2.unit(X.array_of(x))
    # distinct points of the top fibre give incomparable units
    yp = yoneda(D2, X, "p")
    yq = yoneda(D2, X, "q")
    assert yp != yq and not p_leq(D2, X, yp, yq)


def test_direct_inverse_image_adjunction():
    X = discrete(LUK3, ["a", "b", "c"])
    Y = discrete(LUK3, ["u", "v"])
    PX, PY = build_px(LUK3, X), build_px(LUK3, Y)
    rng = random.Random(2)
    for f in all_maps(X, Y):
        for _ in range(10):
            sig = PX.sample(rng)
            tau = PY.sample(rng)
            lhs = p_leq(LUK3, Y,
                        direct_image(LUK3, Y.array_of, f, sig), tau)
            rhs = p_leq(LUK3, X, sig,
                        inverse_image(LUK3, X.elements, f, tau))
            assert lhs == rhs


def test_mult_matches_subset_oracle_over_two():
    # over two, s_X is union of the selected subsets
    X = discrete(TWO, ["a", "b", "c"])
    PX = build_px(TWO, X)
    subsets = [frozenset(c) for k in range(4)
               for c in itertools.combinations(X.elements, k)]
    for chosen in itertools.combinations(subsets, 2):
        Sigma = make_presheaf(
            TWO, PX.array_of, "*",
            [(subset_presheaf(X, s), "1") for s in chosen])
        got = mult(TWO, X, Sigma)
        expect = subset_presheaf(X, frozenset().union(*chosen))
        assert got == expect


def test_mate_unmate_are_inverse_order_isos():
    X = discrete(LUK3, ["a", "b"])
    Y = discrete(LUK3, ["u", "v"])
    rng = random.Random(9)
    for _ in range(40):
        phi = sample_relation(LUK3, X, Y, rng)
        psi = sample_relation(LUK3, X, Y, rng)
        m_phi = {y: mate(LUK3, X, Y, phi, y) for y in Y.elements}
        assert unmate(LUK3, X, Y, m_phi) == phi
        # order iso both ways
        lhs = rel_leq(phi, psi)
        rhs = all(p_leq(LUK3, X, m_phi[y], mate(LUK3, X, Y, psi, y))
                  for y in Y.elements)
        assert lhs == rhs


def test_kleisli_extension_is_composition_with_the_relation():
    X = discrete(LUK3, ["a", "b"])
    Y = discrete(LUK3, ["u", "v"])
    PX = build_px(LUK3, X)
    PY = build_px(LUK3, Y)
    rng = random.Random(17)
    for _ in range(25):
        phi = sample_relation(LUK3, X, Y, rng)
        tau = PY.sample(rng)
        direct = kleisli_ext(LUK3, phi, tau)
        # same thing through P(mate) then mult
        pushed = direct_image(LUK3, PX.array_of,
                              lambda y: mate(LUK3, X, Y, phi, y),
                              tau)
        assert direct == mult(LUK3, X, pushed)


def test_mate_through_unit_recovers_the_relation():
    X = discrete(TWO, ["a", "b"])
    Y = discrete(TWO, ["u"])
    rng = random.Random(4)
    for _ in range(20):
        phi = sample_relation(TWO, X, Y, rng)
        for y in Y.elements:
            assert kleisli_ext(TWO, phi, yoneda(TWO, Y, y)) == \
                mate(TWO, X, Y, phi, y)


def test_counit_relation_recovers_identity():
    # 1_X^o = y_X^o . eps_X
    from laxdist.qrel import cograph, id_rel
    X = set_over(D2, [("p", "1"), ("q", "0")])
    PX = build_px(D2, X)
    eps = counit_rel(D2, X, PX)
    y = yoneda_map(D2, X, PX)
    assert rel_compose(cograph(D2, y), eps) == id_rel(D2, X)


MONAD_LAW_CASES = [
    (TWO, discrete(TWO, ["a", "b", "c"])),
    (D2, set_over(D2, [("p", "1"), ("q", "1"), ("r", "0")])),
    (LUK3, discrete(LUK3, ["a", "b"])),
    (Z2, discrete(Z2, ["a", "b"])),
]


@pytest.mark.parametrize("q,X", MONAD_LAW_CASES,
                         ids=[q.name for q, _ in MONAD_LAW_CASES])
def test_presheaf_monad_laws_hold_strictly(q, X):
    rep = check_presheaf_monad_laws(q, X, BUDGET)
    assert rep.ok, rep.summary()
    for it in rep.items:
        assert it.strict is not False


def test_monad_law_associativity_exhaustive_on_tiny_case():
    rep = check_presheaf_monad_laws(TWO, discrete(TWO, ["a"]), BUDGET)
    assert all(it.status == "pass-exhaustive" for it in rep.items)


def test_kleisli_fact_suite():
    X = discrete(TWO, ["a", "b"])
    Y = discrete(TWO, ["u", "v"])
    rep = check_kleisli_facts(TWO, X, Y, BUDGET)
    assert rep.ok, rep.summary()


def test_theta_transform_strict_along_iota():
    v = builtin_quantale("luk", 2)
    dv = diagonal(v)
    iota, delta, gamma = globalizations(v, dv)
    X = discrete(v, ["a", "b"])
    Y = discrete(v, ["u"])
    rep = check_theta_transform(iota, X, Y, BUDGET)
    assert rep.ok and rep.all_strict, rep.summary()


def test_theta_transform_lax_along_delta_and_gamma():
    v = builtin_quantale("two")
    dv = diagonal(v)
    _, delta, gamma = globalizations(v, dv)
    X = set_over(dv, [("p", "1"), ("q", "0")])
    Y = set_over(dv, [("u", "1")])
    for hom in (delta, gamma):
        rep = check_theta_transform(hom, X, Y, BUDGET)
        assert rep.ok, rep.summary()


def test_meet_and_join_bracket_the_order():
    X = discrete(LUK3, ["a", "b"])
    PX = build_px(LUK3, X)
    rng = random.Random(23)
    for _ in range(30):
        p1, p2 = PX.sample(rng), PX.sample(rng)
        if p1.codomain != p2.codomain:
            continue
        j = p_join(LUK3, X, p1, p2)
        m = p_meet(LUK3, X, p1, p2)
        assert p_leq(LUK3, X, m, p1) and p_leq(LUK3, X, p1, j)
