import itertools

import pytest

from gwtaut.brackets import ClassExpr, Insertion, bracket, canonicalize
from gwtaut.cohomology import OMEGA, ONE, alpha, beta
from gwtaut.p1eval import NotEvaluable, evaluate_expr
from gwtaut.reducer import Reducer
from gwtaut.relations import (PreconditionError, SetPartitionSpec, elliptic_terms,
                              elliptic_vanishing, monodromy_relation, raw_monodromy_relation)

A, B = alpha(1), beta(1)


def test_monodromy_single_pair():
    rel = monodromy_relation((), [0], [1], (), d=1, r=0)
    want = canonicalize(bracket(1, 1, [(0, A), (1, B)])) + canonicalize(bracket(1, 1, [(0, B), (1, A)]))
    assert rel.expr == want
    assert rel.depends == ("unbalanced-vanishing",)


def test_monodromy_preconditions():
    with pytest.raises(PreconditionError):
        monodromy_relation((), [0], [1], {0}, d=1, r=0)
    with pytest.raises(PreconditionError):
        monodromy_relation((), [0, 1], [1], (), d=1, r=0)
    with pytest.raises(PreconditionError):
        monodromy_relation((Insertion.pure(0, A),), [0], [1], (), d=1, r=0)


def test_raw_monodromy_of_beta():
    t = bracket(1, 1, [(1, A), (0, B)], r=0)
    rel = raw_monodromy_relation(t)
    assert rel.expr == canonicalize(bracket(1, 1, [(1, A), (0, A)]))


def test_set_partition_validation():
    with pytest.raises(ValueError):
        SetPartitionSpec([(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        SetPartitionSpec([(0,)])
    with pytest.raises(PreconditionError):
        elliptic_terms((), SetPartitionSpec([(0, 1)]), [0, 1, 2], d=1, r=0)
    with pytest.raises(PreconditionError):
        elliptic_terms((Insertion.pure(0, OMEGA),), SetPartitionSpec([(0, 1)]), [0, 1], d=1, r=0)


def test_elliptic_pair_odd_sector():
    rel = elliptic_vanishing((), SetPartitionSpec([(0, 1)]), [0, 1], d=1, r=0, odd_only=True)
    want = canonicalize(bracket(1, 1, [(0, B), (1, A)])) - canonicalize(bracket(1, 1, [(0, A), (1, B)]))
    assert rel.expr == want


def test_elliptic_term_count():
    terms = elliptic_terms((), SetPartitionSpec([(0, 1, 2), (3, 4)]), [0] * 5, d=1, r=0)
    assert len(terms) == 9 * 4


def _value(red, expr):
    return sum((c * evaluate_expr(red.reduce(a)) for a, c in expr.items()), 0)


def test_elliptic_relations_evaluate_to_zero():
    red = Reducer()
    checked = 0
    for d in (1, 2):
        for M in ((), (Insertion.pure(0, ONE),)):
            for parts, n in (([(0, 1)], 2), ([(0, 1, 2)], 3)):
                for levels in itertools.product([0, 1], repeat=n):
                    rel = elliptic_vanishing(M, SetPartitionSpec(parts), list(levels), d=d, r=0)
                    if rel.trivial:
                        continue
                    try:
                        assert _value(red, rel.expr) == 0
                    except NotEvaluable:
                        continue
                    checked += 1
    assert checked >= 10
