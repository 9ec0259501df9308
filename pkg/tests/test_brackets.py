import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gwtaut.brackets import (HALF, TILDE, BaseAtom, BracketTerm, ClassExpr, Glue, Insertion, ZERO,
                             bracket, canonical_atom, canonicalize, dimension_for, genus_of, glue,
                             odd_type)
from gwtaut.cohomology import OMEGA, ONE, CohVector, alpha, beta
from gwtaut.partitions import Partition

A, B = alpha(1), beta(1)


def test_render_grammar():
    t = bracket(1, 1, [(0, A), (0, B)], [(1,)], r=1)
    assert t.render() == "[ t0(a) t0(b) | (1) ]_{r=1, h=1, d=1}"
    assert bracket(2, 0, [], r=0).render() == "[ ]_{r=0, h=2, d=0}"
    assert bracket(1, 2, [(TILDE, OMEGA), ("foo", ONE)]).render() == \
        "[ t~(w) t{foo}(1) ]_{r=0, h=1, d=2}"
    assert bracket(2, 1, [(0, alpha(2))]).render() == "[ t0(a2) ]_{r=0, h=2, d=1}"


def test_validation():
    with pytest.raises(ValueError):
        bracket(1, 3, [(0, A)], [(2,)])
    with pytest.raises(ValueError):
        bracket(1, 1, [(0, alpha(2))])


def test_genus_includes_markings():
    # r = 2g - 2 + d(2 - 2h) + sum(l(eta) - d) + n - sum(k + codim)
    assert genus_of(bracket(1, 1, [(0, A), (0, B)], [(1,)], r=1)) == 1
    assert genus_of(bracket(1, 1, [(0, A), (0, B)], [(1,)], r=0)) is HALF
    assert genus_of(bracket(1, 2, [(2, OMEGA)])) == 2
    assert genus_of(bracket(1, 2, [(TILDE, OMEGA)])) is None


@given(st.integers(0, 3), st.integers(1, 3), st.integers(0, 4), st.lists(st.integers(0, 3), max_size=3))
def test_dimension_inverts_genus(h, d, g, levels):
    t = bracket(h, d, [(k, OMEGA) for k in levels])
    r = dimension_for(t, g)
    assert genus_of(t.with_(r=r)) == g


def test_koszul_sign_and_zero():
    t = bracket(1, 1, [(0, B), (0, A)], r=1)
    s, c = canonical_atom(t)
    assert s == -1 and c.insertions[0].symbol == A
    assert not canonicalize(bracket(1, 1, [(0, A), (0, A), (1, B), (1, B)], r=1))
    assert canonicalize(bracket(1, 1, [(0, A), (0, A), (0, B)], r=-1)) == ZERO


@st.composite
def odd_brackets(draw):
    n = draw(st.integers(1, 5))
    syms = draw(st.lists(st.sampled_from([A, B, ONE, OMEGA]), min_size=n, max_size=n))
    levels = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    return bracket(1, 1, list(zip(levels, syms)), r=draw(st.integers(0, 3)))


@given(odd_brackets(), st.randoms())
def test_canonical_form_is_permutation_invariant(t, rnd):
    perm = list(range(len(t.insertions)))
    rnd.shuffle(perm)
    moved = t.with_(insertions=tuple(t.insertions[i] for i in perm))
    odd = [t.insertions[i].symbol.is_odd for i in perm]
    inv = sum(1 for i, j in itertools.combinations(range(len(perm)), 2)
              if odd[i] and odd[j] and perm[i] > perm[j])
    assert canonicalize(moved) == canonicalize(t).scale((-1) ** inv)


@given(odd_brackets())
def test_canonicalize_idempotent(t):
    e = canonicalize(t)
    again = ClassExpr()
    for a, c in e.items():
        again = again + canonicalize(a).scale(c)
    assert again == e


def test_multilinear_expansion():
    x = Insertion.make({0: 1, 2: Fraction(1, 2)}, CohVector({OMEGA: 3}))
    e = canonicalize(BracketTerm(1, 1, (), (x,), 0))
    assert e == ClassExpr({bracket(1, 1, [(0, OMEGA)]): 3, bracket(1, 1, [(2, OMEGA)]): Fraction(3, 2)})


def test_odd_type_and_expressions():
    t = bracket(1, 1, [(0, A), (1, A), (0, B)], r=0)
    assert odd_type(t) == (2, 1)
    base = BaseAtom(bracket(0, 1, [(0, OMEGA)], [(1,)]))
    with pytest.raises(ValueError):
        BaseAtom(t)
    e = ClassExpr.atom(base, 2) - ClassExpr.atom(base, 2)
    assert e == ZERO and (ClassExpr.atom(base) + ClassExpr.atom(base))[base] == 2
    g = glue(ClassExpr.atom(base, 3), ClassExpr.atom(base, Fraction(1, 2)), 1)
    (atom, c), = g.items()
    assert isinstance(atom, Glue) and c == Fraction(3, 2)
    assert g.to_json()[0]["coeff"] == "3/2"


def test_profile_order_kept():
    t = bracket(0, 2, [], [(1, 1), (2,)])
    assert t.profiles == (Partition((1, 1)), Partition((2,)))
