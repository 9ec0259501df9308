from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gwtaut.brackets import BracketTerm, ClassExpr, bracket, canonical_atom
from gwtaut.cohomology import OMEGA, ONE, alpha, beta
from gwtaut.parse import ParseError, parse, parse_bracket
from gwtaut.partitions import enumerate_partitions


def test_valid_examples():
    t = parse("[ t0(a) t0(b) | (1) ]_{r=1, h=1, d=1}")
    assert isinstance(t, BracketTerm) and t.h == 1 and t.profiles == ((1,),)
    assert parse("[ t1(w) ]_{r=0, h=1, d=2}").insertions[0].symbol == OMEGA


def test_profile_size_error():
    with pytest.raises(ParseError) as e:
        parse("[ t0(a) | (2) ]_{r=0, h=1, d=3}")
    assert e.value.kind == "semantic" and (e.value.line, e.value.column) == (1, 11)
    assert "profile size 2 != d=3" in str(e.value)


@pytest.mark.parametrize("text,line,col", [
    ("[ t0(q) ]_{r=0, h=1, d=1}", 1, 6),
    ("[ t0(a)\n  t0(b) | (1,1 ]_{r=0, h=1, d=2}", 2, 16),
    ("[ t0(a) ]_{r=0, d=1, h=1}", 1, 17),
    ("[ tx(a) ]_{r=0, h=1, d=1}", 1, 3),
    ("[ t0(a) $ ]_{r=0, h=1, d=1}", 1, 9),
])
def test_syntax_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as e:
        parse(text)
    assert (e.value.line, e.value.column) == (line, col) and e.value.kind == "syntax"


def test_class_symbol_semantics():
    with pytest.raises(ParseError, match="handle index"):
        parse("[ t0(a) ]_{r=0, h=2, d=1}")
    with pytest.raises(ParseError, match="not defined"):
        parse("[ t0(b3) ]_{r=0, h=2, d=1}")
    t = parse("[ t0(a2) t{~}(w) t~(1) t{prof}(w) ]_{r=0, h=2, d=1}")
    assert [x.level for x in t.insertions] == [0, "~", "~", "prof"]


def test_linear_combination():
    e = parse("2/3*[ t0(w) ]_{r=0, h=1, d=1} - [ t2(w) ]_{r=0, h=1, d=1} + 1/2 [ t0(w) ]_{r=0, h=1, d=1}")
    assert isinstance(e, ClassExpr)
    assert e[bracket(1, 1, [(0, OMEGA)])] == Fraction(7, 6)
    assert e[bracket(1, 1, [(2, OMEGA)])] == -1
    with pytest.raises(ParseError):
        parse("1/0 [ ]_{r=0, h=1, d=1}")


@st.composite
def canonical_terms(draw):
    h = draw(st.integers(0, 2))
    d = draw(st.integers(1, 3))
    syms = [ONE, OMEGA] + [f(i) for i in range(1, h + 1) for f in (alpha, beta)]
    n = draw(st.integers(0, 4))
    ins = [(draw(st.one_of(st.integers(0, 5), st.sampled_from(["~", "name"]))), draw(st.sampled_from(syms)))
           for _ in range(n)]
    profs = draw(st.lists(st.sampled_from(enumerate_partitions(d)), max_size=2))
    t = bracket(h, d, ins, profs, draw(st.integers(0, 4)))
    s, c = canonical_atom(t)
    return c if s else t


@given(canonical_terms())
def test_parse_render_round_trip(t):
    assert parse_bracket(t.render()) == t
    assert parse(t.render()) == t
