import math

import pytest
from hypothesis import given, strategies as st

from gwtaut.partitions import (Partition, aut_count, class_size, enumerate_partitions, sign,
                               zfactor)

PARTITION_COUNTS = {1: 1, 2: 2, 3: 3, 4: 5, 5: 7, 6: 11, 7: 15, 8: 22}


@pytest.mark.parametrize("d,count", PARTITION_COUNTS.items())
def test_partition_counts(d, count):
    assert len(enumerate_partitions(d)) == count


def test_reverse_lex_order():
    assert enumerate_partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


def test_reject_bad_degree():
    with pytest.raises(ValueError):
        enumerate_partitions(0)
    with pytest.raises(ValueError):
        Partition((2, 0))


def test_centralizer_of_double_transposition():
    # (12)(34) in S_5 has cycle type (2,2,1): |Aut| = 2, product of parts = 4
    assert zfactor(Partition((2, 2, 1))) == 8
    assert class_size(Partition((2, 2, 1))) == 15


@pytest.mark.parametrize("d", range(1, 9))
def test_class_equation(d):
    assert sum(class_size(mu) for mu in enumerate_partitions(d)) == math.factorial(d)


def test_sign_and_aut():
    assert sign(Partition((2, 1))) == -1
    assert sign(Partition((3,))) == 1
    assert aut_count(Partition((1, 1, 1))) == 6


def test_text_form():
    p = Partition.parse("(3,2,1)")
    assert p == (3, 2, 1) and str(p) == "(3,2,1)"
    assert Partition((1, 3)) == (3, 1)


@given(st.lists(st.integers(1, 6), min_size=1, max_size=6))
def test_parse_render_round_trip(parts):
    p = Partition(parts)
    assert Partition.parse(str(p)) == p
    assert p.size == sum(parts) and p.length == len(parts)
