import pytest

from gwtaut.brackets import bracket, canonicalize
from gwtaut.cohomology import OMEGA, ONE, alpha, beta
from gwtaut.degeneration import (PreconditionError, degenerate_irreducible, degenerate_rational_tail,
                                 rational_tail_summands, separating_summands)
from gwtaut.p1eval import eval_bracket, evaluate_expr
from gwtaut.partitions import enumerate_partitions


def _value(expr):
    return evaluate_expr(expr)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("levels", [(0,), (2,), (1, 1), (0, 2), (4,)])
def test_irreducible_degeneration_matches_character_sum(d, levels):
    t = bracket(1, d, [(k, OMEGA) for k in levels])
    if not canonicalize(t):
        pytest.skip("half-integral genus")
    assert _value(degenerate_irreducible(t)) == eval_bracket(t)


def test_irreducible_degeneration_sum_shape():
    t = bracket(1, 3, [(2, OMEGA)], [(3,)])
    e = degenerate_irreducible(t)
    assert all(a.h == 0 and len(a.profiles) == 3 for a in e)
    assert len(e) <= len(enumerate_partitions(3))


@pytest.mark.parametrize("d", [1, 2])
def test_rational_tail_matches_character_sum(d):
    t = bracket(1, d, [(2, OMEGA), (1, OMEGA), (1, OMEGA)])
    total = 0
    for s in rational_tail_summands(t):
        total += s.coeff * eval_bracket(s.left) * eval_bracket(s.right)
    assert total == eval_bracket(t)


def test_rational_tail_keeps_odd_on_curve():
    t = bracket(1, 1, [(0, alpha(1)), (0, beta(1)), (0, OMEGA), (0, ONE)], [(1,)], r=1)
    for s in rational_tail_summands(t):
        assert s.right.h == 0 and s.right.is_even
        assert sum(x.symbol.is_odd for x in s.left.insertions) == 2
        assert s.left.r + s.right.r == t.r
    with pytest.raises(PreconditionError):
        rational_tail_summands(t, omega=[0])


def test_separating_degeneration_genus_two():
    t = bracket(2, 2, [(2, OMEGA), (0, OMEGA)])
    total = 0
    for s in separating_summands(t):
        total += s.coeff * eval_bracket(s.left) * eval_bracket(s.right)
    assert total == eval_bracket(t)


def test_separating_moves_handles():
    t = bracket(2, 1, [(0, alpha(2)), (1, beta(2)), (0, alpha(1))], r=0)
    for s in separating_summands(t):
        assert [x.symbol for x in s.right.insertions] == [alpha(1), beta(1)]
        assert [x.symbol for x in s.left.insertions] == [alpha(1)]


def test_preconditions():
    with pytest.raises(PreconditionError):
        degenerate_irreducible(bracket(1, 1, [(0, alpha(1))]))
    with pytest.raises(PreconditionError):
        separating_summands(bracket(1, 1, [(0, OMEGA)]))
    with pytest.raises(PreconditionError):
        degenerate_rational_tail(bracket(2, 1, [(0, OMEGA)]))


def test_genus_bookkeeping_of_rewrites():
    from gwtaut.brackets import HALF, genus_of

    t = bracket(1, 3, [(2, OMEGA), (1, OMEGA)], [(2, 1)])
    g = genus_of(t)
    for a in degenerate_irreducible(t):
        assert genus_of(a) == g - (len(a.profiles[-1]))
    t2 = bracket(2, 2, [(2, OMEGA), (0, OMEGA), (0, ONE)])
    g2 = genus_of(t2)
    for s in separating_summands(t2):
        g_left, g_right = genus_of(s.left), genus_of(s.right)
        if HALF in (g_left, g_right):
            continue
        assert g_left + g_right + s.ell - 1 == g2
    for s in rational_tail_summands(bracket(1, 2, [(2, OMEGA), (0, ONE)], r=1)):
        g_left, g_right = genus_of(s.left), genus_of(s.right)
        if HALF not in (g_left, g_right):
            assert g_left + g_right + s.ell - 1 == genus_of(bracket(1, 2, [(2, OMEGA), (0, ONE)], r=1))
