"""Exact rational matrix helpers (sympy-backed)."""

from __future__ import annotations

from fractions import Fraction

import sympy


def _to_sympy(rows) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator)
                          for x in row] for row in rows])


def _from_sympy(m: sympy.Matrix) -> list[list[Fraction]]:
    return [[Fraction(int(m[i, j].p), int(m[i, j].q)) for j in range(m.cols)]
            for i in range(m.rows)]


def rank(rows) -> int:
    if not rows:
        return 0
    return _to_sympy(rows).rank()


def inverse(rows) -> list[list[Fraction]]:
    m = _to_sympy(rows)
    if m.rows != m.cols or m.det() == 0:
        raise ZeroDivisionError("matrix is singular")
    return _from_sympy(m.inv())


def matmul(a, b) -> list[list[Fraction]]:
    return [[sum((Fraction(a[i][k]) * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
