import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toric.errors import AdmissibilityError, GluingError, InvalidPairError, SizeMismatchError
from toric.kempe import ChordMultiset, EdgeWeighting, KempeGraph, admissible_weightings, induced_weighting, kempe_graphs, star_product
from toric.pluecker import (
    TripodExponents,
    evaluate,
    exponents_from_weighting,
    initial_form,
    initial_ideal,
    leading_term,
    phi,
    phi_monomial,
    random_minors_check,
    straighten,
    straighten_monomial,
    weight_deficit,
    weighting_from_exponents,
)
from toric.tree import all_triangulations, decompose, dual_tree, fan_triangulation, random_triangulation, symmetric_hexagon

FAN4 = dual_tree(fan_triangulation(4))


def K(n, *chords):
    return KempeGraph(n, list(chords))


def test_straighten_examples():
    assert straighten(K(4, (1, 2)), K(4, (3, 4))) == {K(4, (1, 2), (3, 4)): 1}
    assert straighten(K(4, (1, 3)), K(4, (2, 4))) == {K(4, (1, 2), (3, 4)): 1, K(4, (1, 4), (2, 3)): 1}
    assert straighten(K(4, (1, 3)), K(4, (1, 3))) == {K(4, (1, 3), (1, 3)): 1}
    with pytest.raises(SizeMismatchError):
        straighten(K(4), K(5))


def test_straighten_matches_minors():
    rng = np.random.default_rng(0)
    for n in (4, 5, 6):
        chords = list(itertools.combinations(range(1, n + 1), 2))
        for _ in range(20):
            picks = [chords[k] for k in rng.integers(len(chords), size=4)]
            m = ChordMultiset(n, picks)
            exp = straighten_monomial(m)
            assert all(c > 0 for c in exp.values())
            assert all(g.degree == 4 for g in exp)
            assert random_minors_check(exp, m, rng) < 1e-10


def test_straighten_is_exact_integer_identity():
    # independent oracle: integer matrices make every bracket an exact integer
    rng = np.random.default_rng(1)
    m = ChordMultiset(6, [(1, 4), (2, 5), (3, 6), (1, 5)])
    exp = straighten_monomial(m)
    for _ in range(10):
        A = rng.integers(-5, 6, size=(2, 6)).astype(object)
        lhs = evaluate(m, A)
        rhs = sum(c * evaluate(g, A) for g, c in exp.items())
        assert lhs == rhs


def test_leading_term_examples():
    g, w = leading_term(K(4, (1, 3)), K(4, (2, 4)), FAN4)
    assert (g, w) == (K(4, (1, 4), (2, 3)), 6)
    weights = straighten(K(4, (1, 3)), K(4, (2, 4))).weights(FAN4)
    assert sorted(weights.values()) == [4, 6]
    g, w = leading_term(K(4, (1, 2)), K(4, (3, 4)), FAN4)
    assert g == K(4, (1, 2), (3, 4)) and w == 4


def test_initial_form_fan4():
    form = initial_form((1, 2, 3, 4), FAN4)
    assert {m.edges: c for m, c in form.items()} == {
        (((1, 3), 1), ((2, 4), 1)): -1,
        (((1, 4), 1), ((2, 3), 1)): 1,
    }
    assert weight_deficit((1, 2, 3, 4), FAN4) == 2
    with pytest.raises(InvalidPairError):
        initial_form((2, 1, 3, 4), FAN4)


def test_initial_forms_are_binomials():
    for n in range(4, 8):
        for t in all_triangulations(n):
            tree = dual_tree(t)
            forms = initial_ideal(tree)
            assert len(forms) == len(list(itertools.combinations(range(n), 4)))
            for q, form in forms:
                assert len(form) == 2
                d = weight_deficit(q, tree)
                assert d > 0 and d % 2 == 0


def test_initial_form_tied_terms_cover_same_edges():
    for t in all_triangulations(6):
        tree = dual_tree(t)
        for q, form in initial_ideal(tree):
            covers = [induced_weighting(m, tree).w for m in form]
            assert covers[0] == covers[1]


def test_phi_examples():
    tri = decompose(dual_tree(fan_triangulation(3)))
    assert phi(1, 2, tri).x == ((1, 0, 0),)
    hexf = decompose(dual_tree(symmetric_hexagon()))
    x = phi(1, 4, hexf)
    used = [i for i, row in enumerate(x.x) if any(row)]
    assert used == [0, 1, 3]
    # Z13(tau_1) Z12(tau_2) Z13(tau_4) in 1-based slot labels
    assert x.x == ((0, 1, 0), (1, 0, 0), (0, 0, 0), (0, 1, 0))
    assert x.degree == 1
    with pytest.raises(InvalidPairError):
        phi(2, 2, hexf)


def test_phi_degree_is_one():
    for t in all_triangulations(6):
        f = decompose(dual_tree(t))
        for i, j in itertools.combinations(range(1, 7), 2):
            assert phi(i, j, f).degree == 1


def test_exponents_from_weighting_examples():
    tri = decompose(dual_tree(fan_triangulation(3)))
    w = EdgeWeighting(tri.tree, (1, 1, 2))
    assert exponents_from_weighting(w, tri).x == ((0, 1, 1),)
    f4 = decompose(FAN4)
    assert exponents_from_weighting(EdgeWeighting(FAN4, (0,) * 5), f4) == TripodExponents.zero(f4)
    with pytest.raises(AdmissibilityError):
        exponents_from_weighting(EdgeWeighting(tri.tree, (1, 1, 1)), tri)


def test_gluing_is_enforced():
    f4 = decompose(FAN4)
    with pytest.raises(GluingError):
        TripodExponents(f4, ((0, 1, 0), (0, 0, 0)))


def test_phi_is_multiplicative():
    for n in range(4, 8):
        for t in all_triangulations(n):
            tree = dual_tree(t)
            f = decompose(tree)
            for g in kempe_graphs(n, 2):
                assert phi_monomial(g, f) == exponents_from_weighting(induced_weighting(g, tree), f)


@settings(max_examples=50, deadline=None)
@given(st.integers(4, 8), st.integers(0, 2**32 - 1))
def test_weighting_exponent_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    tree = dual_tree(random_triangulation(n, rng))
    f = decompose(tree)
    ws = list(admissible_weightings(tree, 2))
    w = ws[rng.integers(len(ws))]
    x = exponents_from_weighting(w, f)
    assert weighting_from_exponents(x) == w
    assert x.degree == w.degree


def test_leading_term_equals_star_product_small():
    for n in (4, 5, 6):
        for t in all_triangulations(n):
            tree = dual_tree(t)
            gs = list(kempe_graphs(n, 2))
            for g1, g2 in itertools.combinations(gs, 2):
                g, w = leading_term(g1, g2, tree)
                assert g == star_product(g1, g2, tree)
                assert w == g1.weight(tree) + g2.weight(tree)
