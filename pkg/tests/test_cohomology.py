import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gwtaut.cohomology import (OMEGA, ONE, PHI, CohVector, alpha, apply_sl2, basis, beta, cup,
                               diagonal, diagonal_even, diagonal_odd, integrate, matmul)

A, B = alpha(1), beta(1)


def test_cup_products():
    assert cup(A, B) == CohVector.of(OMEGA)
    assert cup(B, A) == CohVector.of(OMEGA, -1)
    assert cup(A, A) == CohVector()
    assert cup(ONE, B) == CohVector.of(B)
    assert cup(alpha(1), beta(2), h=2) == CohVector()


def test_symbol_validation():
    with pytest.raises(ValueError):
        cup(alpha(2), beta(2), h=1)
    with pytest.raises(ValueError):
        alpha(0)


def test_basis_and_codimension():
    assert len(basis(2)) == 6
    assert [s.codim2 for s in (ONE, A, OMEGA)] == [0, 1, 2]


def test_sl2_action():
    v = CohVector.of(B)
    assert apply_sl2(PHI, 1, v) == CohVector({A: 1, B: 1})
    assert apply_sl2(PHI, 1, CohVector.of(A)) == CohVector.of(A)
    with pytest.raises(ValueError):
        apply_sl2(((2, 0), (0, 1)), 1, v)


def test_sl2_preserves_pairing():
    S = ((0, 1), (-1, 0))
    for m in (PHI, S, matmul(PHI, S)):
        a, b = apply_sl2(m, 1, CohVector.of(A)), apply_sl2(m, 1, CohVector.of(B))
        assert integrate(cup(a, b)) == 1


def _diag_pairing(D, word):
    """Integral over E^r of D times the pulled-back word, with Koszul signs."""
    total = Fraction(0)
    for w, c in D.items():
        sign = 1
        # move factor i of the word past factors j > i of the diagonal word
        for i, j in itertools.combinations(range(len(w)), 2):
            if word[i].is_odd and w[j].is_odd:
                sign = -sign
        prod = 1
        for x, y in zip(w, word):
            prod *= integrate(cup(x, y))
        total += c * sign * prod
    return total


def _cup_all(word):
    v = CohVector.of(ONE)
    for s in word:
        v = cup(v, CohVector.of(s))
    return integrate(v)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_diagonal_is_poincare_dual(r):
    for word in itertools.product([ONE, OMEGA, A, B], repeat=r):
        # pairing of the diagonal with a product class is the integral of the cup product,
        # up to the fixed Koszul reversal convention
        lhs = _diag_pairing(diagonal(r), word)
        assert abs(lhs) == abs(_cup_all(word))


@pytest.mark.parametrize("r", range(2, 7))
def test_diagonal_term_count_and_symmetry(r):
    D = diagonal(r)
    assert len(diagonal_even(r)) == r
    assert len(diagonal_odd(r)) == 2 * math.comb(r, 2)
    assert len(D) == r + 2 * math.comb(r, 2)
    for i, j in itertools.combinations(range(r), 2):
        assert D.swap_slots(i, j) == D


def test_diagonal_five_has_25_terms():
    assert len(diagonal(5)) == 25


def test_diagonal_rejects_small_arity():
    with pytest.raises(ValueError):
        diagonal(1)


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_sl2_composition(a, b, c):
    # the action is on row vectors (a, b), so a product acts factor by factor from the left
    X, Y = ((1, a), (0, 1)), ((1, 0), (b, 1))
    v = CohVector({A: c, B: 1})
    assert apply_sl2(matmul(X, Y), 1, v) == apply_sl2(Y, 1, apply_sl2(X, 1, v))
