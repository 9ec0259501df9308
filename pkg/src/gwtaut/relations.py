"""Monodromy and elliptic-vanishing relations for genus-one targets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .brackets import (Acc, BracketTerm, ClassExpr, Insertion, Level, canonicalize,
                       map_classes, shuffle_sign)
from .cohomology import PHI, CohVector, OMEGA, ONE, alpha, apply_sl2, beta, diagonal


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    """A ClassExpr asserted to vanish."""

    expr: ClassExpr
    label: str  # monodromy | elliptic | degeneration
    depends: tuple = ()

    @property
    def trivial(self) -> bool:
        return not self.expr

    def to_json(self) -> dict:
        return {"label": self.label, "depends": list(self.depends), "trivial": self.trivial,
                "expr": self.expr.to_json()}


@dataclass(frozen=True)
class SetPartitionSpec:
    parts: tuple  # tuple of tuples of indices into K

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(tuple(p) for p in self.parts))
        flat = [k for p in self.parts for k in p]
        if len(flat) != len(set(flat)):
            raise ValueError("set partition parts must be disjoint")
        if any(len(p) < 2 for p in self.parts):
            raise ValueError("set partition parts need at least 2 elements")

    @property
    def support(self) -> set:
        return {k for p in self.parts for k in p}


def _as_insertion(level, sym) -> Insertion:
    return Insertion.make(level, sym)


def raw_monodromy_relation(t: BracketTerm, matrix=PHI) -> Relation:
    """canonicalize(phi(t)) - canonicalize(t): deformation invariance under monodromy."""
    if t.h != 1:
        raise PreconditionError("monodromy relations are generated for genus-1 targets")
    moved = map_classes(t, lambda v: apply_sl2(matrix, 1, v))
    return Relation(canonicalize(moved) - canonicalize(t), "monodromy")


def monodromy_term(N: Sequence[Insertion], n: Sequence, m: Sequence, D: set, *, d: int,
                   r: int, profiles=()) -> BracketTerm:
    """[N tau_{n,m}(D)]: alpha at indices in D (I = 0..|n|-1, J after), beta elsewhere."""
    k = len(n)
    odd = []
    for idx, lv in enumerate(list(n) + list(m)):
        odd.append(_as_insertion(lv, alpha(1) if idx in D else beta(1)))
    return BracketTerm(1, d, tuple(profiles), tuple(N) + tuple(odd), r)


def monodromy_relation(N: Sequence[Insertion], n: Sequence, m: Sequence, delta, *, d: int,
                       r: int, profiles=()) -> Relation:
    """R(N, n, m, delta) = sum over |I|-subsets D of I u J containing delta."""
    if len(n) != len(m):
        raise PreconditionError("|I| must equal |J|")
    k = len(n)
    delta = set(delta)
    if not delta < set(range(k)) or delta == set(range(k)):
        raise PreconditionError("delta must be a proper subset of I")
    for x in N:
        if any(s.is_odd for s in x.cls):
            raise PreconditionError("N must consist of monodromy-invariant (even) insertions")
    acc = Acc()
    others = [i for i in range(2 * k) if i not in delta]
    for extra in itertools.combinations(others, k - len(delta)):
        D = delta | set(extra)
        acc.add(canonicalize(monodromy_term(N, n, m, D, d=d, r=r, profiles=profiles)))
    return Relation(acc.freeze(), "monodromy", ("unbalanced-vanishing",))


def elliptic_terms(M: Sequence[Insertion], P: SetPartitionSpec, levels: Sequence, *, d: int,
                   r: int, odd_only: bool = False) -> list[tuple[Fraction, BracketTerm]]:
    """Kunneth expansion of prod_p phi_p^*(Delta_|p|), before canonical sorting.

    Terms are returned with insertions in the order M, then K; the sign
    includes the Koszul reordering from part order to K order.
    """
    for x in M:
        if set(x.cls) != {ONE}:
            raise PreconditionError("M must consist of identity insertions only")
    K = sorted(P.support)
    if K != list(range(len(levels))):
        raise PreconditionError("the set partition must cover the descendent assignment")
    per_part = []
    for p in P.parts:
        p = tuple(sorted(p))
        diag = diagonal(len(p))
        per_part.append([(p, w, c) for w, c in diag.items()
                         if not odd_only or any(s.is_odd for s in w)])
    out = []
    for combo in itertools.product(*per_part):
        coeff = Fraction(1)
        slot_sym = {}
        order = []
        for p, w, c in combo:
            coeff *= c
            for k, s in zip(p, w):
                slot_sym[k] = s
                order.append(k)
        oddflags = [slot_sym[k].is_odd for k in K]
        coeff *= shuffle_sign([K.index(k) for k in order], oddflags)
        ins = tuple(M) + tuple(_as_insertion(levels[k], slot_sym[k]) for k in K)
        out.append((coeff, BracketTerm(1, d, (), ins, r)))
    return out


def elliptic_vanishing(M: Sequence[Insertion], P: SetPartitionSpec, levels: Sequence, *, d: int,
                       r: int, odd_only: bool = False) -> Relation:
    """V(M, P, l): the elliptic vanishing relation, expanded and canonicalized."""
    acc = Acc()
    for c, t in elliptic_terms(M, P, levels, d=d, r=r, odd_only=odd_only):
        acc.add(canonicalize(t), c)
    return Relation(acc.freeze(), "elliptic")
