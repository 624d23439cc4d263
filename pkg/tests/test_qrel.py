import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from laxdist.carriers import SetOverQ, discrete, set_over
from laxdist.qrel import (FinMap, QRel, all_maps, all_relations, cograph,
                          fin_map, graph, id_rel, identity_map, rel_bottom,
                          rel_compose, rel_join, rel_leq, sample_relation,
                          transpose, whisker)
from laxdist.quantaloid import builtin_quantale, d2
from laxdist.report import SchemaError

TWO = builtin_quantale("two")
LUK3 = builtin_quantale("luk", 3)
D2 = d2()


def bool_rel(q, X, Y, pairs):
    return QRel(q, X, Y, {p: "1" for p in pairs})


def test_bottom_entries_are_dropped():
    X = discrete(TWO, ["a", "b"])
    r = QRel(TWO, X, X, {("a", "a"): "1", ("a", "b"): "0"})
    assert ("a", "b") not in r.entries
    assert r.at("a", "b") == "0"


def test_composition_matches_boolean_matrix_oracle():
    X = discrete(TWO, ["x0", "x1"])
    Y = discrete(TWO, ["y0", "y1"])
    Z = discrete(TWO, ["z0", "z1"])
    pairs_xy = list(itertools.product(X.elements, Y.elements))
    pairs_yz = list(itertools.product(Y.elements, Z.elements))
    for mask1 in range(16):
        phi = bool_rel(TWO, X, Y,
                       [p for i, p in enumerate(pairs_xy) if mask1 >> i & 1])
        for mask2 in range(16):
            psi = bool_rel(TWO, Y, Z,
                           [p for i, p in enumerate(pairs_yz) if mask2 >> i & 1])
            got = rel_compose(psi, phi)
            for x, z in itertools.product(X.elements, Z.elements):
                expect = any(phi.at(x, y) == "1" and psi.at(y, z) == "1"
                             for y in Y.elements)
                assert (got.at(x, z) == "1") == expect


def test_composition_is_associative_over_luk():
    rng = random.Random(11)
    X = discrete(LUK3, ["a", "b"])
    for _ in range(60):
        phi = sample_relation(LUK3, X, X, rng)
        psi = sample_relation(LUK3, X, X, rng)
        tau = sample_relation(LUK3, X, X, rng)
        assert rel_compose(tau, rel_compose(psi, phi)) == \
            rel_compose(rel_compose(tau, psi), phi)


def test_identity_relation_is_neutral():
    X = discrete(LUK3, ["a", "b", "c"])
    rng = random.Random(5)
    for _ in range(25):
        phi = sample_relation(LUK3, X, X, rng)
        assert rel_compose(phi, id_rel(LUK3, X)) == phi
        assert rel_compose(id_rel(LUK3, X), phi) == phi


def test_graph_cograph_adjunction_exhaustive():
    # 1_X <= f^o . f_o and f_o . f^o <= 1_Y for every map at sizes <= 3
    X = discrete(TWO, ["a", "b", "c"])
    Y = discrete(TWO, ["u", "v"])
    for f in all_maps(X, Y):
        unit_ok = rel_leq(id_rel(TWO, X),
                          rel_compose(cograph(TWO, f), graph(TWO, f)))
        counit_ok = rel_leq(rel_compose(graph(TWO, f), cograph(TWO, f)),
                            id_rel(TWO, Y))
        assert unit_ok and counit_ok


def test_surjective_map_counit_is_identity():
    X = discrete(TWO, ["a", "b", "c"])
    Y = discrete(TWO, ["u", "v"])
    f = fin_map(X, Y, lambda x: "u" if x == "a" else "v")
    assert rel_compose(graph(TWO, f), cograph(TWO, f)) == id_rel(TWO, Y)


def test_graph_requires_array_preservation():
    A = set_over(D2, [("a", "1")])
    B = set_over(D2, [("b", "0")])
    f = FinMap(A, B, ("b",))
    with pytest.raises(SchemaError):
        graph(D2, f)


def test_relations_over_d2_respect_hom_constraints():
    X = set_over(D2, [("p", "1"), ("q", "0")])
    # the only nonbottom entries can connect array-1 points
    with pytest.raises(SchemaError):
        QRel(D2, X, X, {("q", "q"): "1"})
    r = QRel(D2, X, X, {("p", "p"): "1"})
    assert r.at("q", "q") == "0"


def test_whisker_both_sides():
    X = discrete(TWO, ["a", "b"])
    Y = discrete(TWO, ["u", "v"])
    f = fin_map(X, X, lambda x: "a")
    g = fin_map(Y, Y, lambda y: "v")
    phi = bool_rel(TWO, X, Y, [("a", "u")])
    out = whisker(phi, pre=f, post=g)
    assert out == rel_compose(graph(TWO, g),
                              rel_compose(phi, graph(TWO, f)))
    out2 = whisker(phi, post=g, post_cograph=True)
    assert out2 == rel_compose(cograph(TWO, g), phi)


def test_transpose_is_an_involution_and_antihomomorphism():
    rng = random.Random(3)
    X = discrete(LUK3, ["a", "b"])
    for _ in range(20):
        phi = sample_relation(LUK3, X, X, rng)
        psi = sample_relation(LUK3, X, X, rng)
        assert transpose(transpose(phi)) == phi
        # over a commutative quantale transpose reverses composition
        assert transpose(rel_compose(psi, phi)) == \
            rel_compose(transpose(phi), transpose(psi))


def test_transpose_refused_off_quantales():
    X = set_over(D2, [("p", "1")])
    with pytest.raises(SchemaError):
        transpose(QRel(D2, X, X, {("p", "p"): "1"}))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_composition_distributes_over_joins(data):
    X = discrete(LUK3, ["a", "b"])
    seed = data.draw(st.integers(0, 10 ** 6))
    rng = random.Random(seed)
    phi1 = sample_relation(LUK3, X, X, rng)
    phi2 = sample_relation(LUK3, X, X, rng)
    psi = sample_relation(LUK3, X, X, rng)
    lhs = rel_compose(psi, rel_join(phi1, phi2))
    rhs = rel_join(rel_compose(psi, phi1), rel_compose(psi, phi2))
    assert lhs == rhs


def test_all_relations_count_over_two():
    X = discrete(TWO, ["a"])
    Y = discrete(TWO, ["u", "v"])
    assert len(list(all_relations(TWO, X, Y))) == 4
    assert len(list(all_relations(TWO, Y, Y))) == 16
