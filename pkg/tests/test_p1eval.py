import math
from fractions import Fraction

import pytest

from gwtaut.brackets import TILDE, bracket
from gwtaut.cohomology import OMEGA, ONE
from gwtaut.p1eval import (EvalConfig, NotEvaluable, ResourceError, SearchFailure, central_character,
                           characters, eval_bracket, eval_p1_relative, find_tilde_tau,
                           hurwitz_bruteforce, mn_character, shifted_power_sum)
from gwtaut.partitions import Partition, class_size, enumerate_partitions, zfactor


def test_s3_character_table():
    t = characters(3)
    assert list(t.partitions) == enumerate_partitions(3)
    assert [list(row) for row in t.table] == [[1, 1, 1], [-1, 0, 2], [1, -1, 1]]
    assert t.dims == (1, 2, 1)


@pytest.mark.parametrize("d", range(1, 9))
def test_orthogonality(d):
    t = characters(d)
    P = t.partitions
    for i, lam in enumerate(P):
        for j, mu in enumerate(P):
            row = sum(Fraction(class_size(nu) * t.chi(lam, nu) * t.chi(mu, nu)) for nu in P)
            assert row == (math.factorial(d) if i == j else 0)
            col = sum(t.chi(lam2, lam) * t.chi(lam2, mu) for lam2 in P)
            assert col == (zfactor(lam) if i == j else 0)


def test_degree_cap():
    with pytest.raises(ResourceError):
        characters(9)
    with pytest.raises(ResourceError):
        find_tilde_tau(9)


def test_murnaghan_nakayama_values():
    assert mn_character((2, 1), (3,)) == -1
    assert mn_character((3, 1), (2, 2)) == -1
    assert mn_character((2, 2), (2, 2)) == 2


def test_central_character_of_transposition():
    # sum of contents
    lam = Partition((3, 1))
    assert central_character(lam, Partition((2, 1, 1))) == 2


def test_hurwitz_examples():
    assert hurwitz_bruteforce(2, [(2,), (2,)]) == Fraction(1, 2)
    assert hurwitz_bruteforce(2, [(2,), (2,)], method="frobenius") == Fraction(1, 2)
    four = [(2, 1)] * 4
    assert hurwitz_bruteforce(3, four) == hurwitz_bruteforce(3, four, method="frobenius") == Fraction(9, 2)
    with pytest.raises(ValueError):
        hurwitz_bruteforce(3, [(2,)])


def test_tube_normalization():
    assert eval_p1_relative((), [(1, 1), (1, 1)]) == Fraction(1, 2)
    assert eval_p1_relative((), [(2,), (2,)]) == Fraction(1, 2)
    assert eval_p1_relative((), [(2,), (1, 1)]) == 0


def test_lines_through_points():
    # one line through each point; each t0(w) carries the completed-cycle constant -1/24
    assert eval_bracket(bracket(0, 1, [(0, OMEGA)], [(1,)])) == 1 - Fraction(1, 24)
    assert eval_bracket(bracket(0, 1, [(0, OMEGA), (0, OMEGA)])) == (1 - Fraction(1, 24)) ** 2


def test_degree_one_genus_one_point_descendent():
    # connected contribution 1/24 plus the degree-zero genus-two constant
    assert eval_bracket(bracket(0, 1, [(2, OMEGA)])) == Fraction(1, 24) + Fraction(7, 5760)


def test_shifted_power_sum_constant():
    # empty-partition value is the regularized constant (1 - 2^-k) zeta(-k)
    assert shifted_power_sum((), 1) == Fraction(1, 2) * Fraction(-1, 12)
    assert shifted_power_sum((), 2) == 0


def test_string_and_dilaton():
    base = bracket(0, 1, [(2, OMEGA)])
    assert eval_bracket(bracket(0, 1, [(2, OMEGA), (0, ONE)])) == \
        eval_bracket(bracket(0, 1, [(1, OMEGA)]))
    # 2g - 2 + n + chi/24 with g = 1, n = 1 and chi(P^1) = 2
    dil = bracket(0, 1, [(2, OMEGA), (1, ONE)])
    assert eval_bracket(dil) == (1 + Fraction(2, 24)) * eval_bracket(base)
    with pytest.raises(NotEvaluable):
        eval_bracket(bracket(0, 1, [(2, ONE), (1, OMEGA)]))


def test_refined_descendent_search():
    ranks = [find_tilde_tau(d).rank for d in range(1, 6)]
    assert ranks == [1, 2, 3, 5, 7]
    tau = find_tilde_tau(2)
    assert tau.coefficients == {0: 1, 1: 1}
    assert tau.to_json()["rank"] == 2


def test_named_profile_evaluation():
    cfg = EvalConfig(profiles={"p": {1: {0: 2, 2: 1}}})
    v = eval_bracket(bracket(0, 1, [("p", OMEGA)], [(1,)]), cfg)
    assert v == 2 * eval_bracket(bracket(0, 1, [(0, OMEGA)], [(1,)])) + \
        eval_bracket(bracket(0, 1, [(2, OMEGA)], [(1,)]))
    assert eval_bracket(bracket(0, 1, [(TILDE, OMEGA)], [(1,)])) == \
        eval_bracket(bracket(0, 1, [(0, OMEGA)], [(1,)]))


def test_search_failure():
    with pytest.raises(SearchFailure):
        find_tilde_tau(4, max_q=0)
