"""Degeneration rewrites: irreducible node, separating node, rational tail."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .brackets import (Acc, BracketTerm, ClassExpr, Insertion, canonicalize, glue,
                       shuffle_sign)
from .cohomology import ALPHA_KIND, OMEGA, ONE, CohSymbol, CohVector
from .partitions import enumerate_partitions, zfactor


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Summand:
    """One term coeff * iota_*(left, right) of a two-component degeneration."""

    coeff: Fraction
    left: BracketTerm
    right: BracketTerm
    ell: int

    def expr(self) -> ClassExpr:
        return glue(canonicalize(self.left), canonicalize(self.right), self.ell).scale(self.coeff)


def _classes(x: Insertion) -> set:
    return set(x.cls)


def _require_even(t: BracketTerm, what: str) -> None:
    if t.has_odd:
        raise PreconditionError(f"{what} applies to even insertions only")


def degenerate_irreducible(t: BracketTerm) -> ClassExpr:
    """Sum over mu of z(mu) [M | eta..., mu, mu] on the genus h-1 normalization."""
    _require_even(t, "the irreducible-node degeneration")
    if t.h < 1:
        raise PreconditionError("target genus must be >= 1")
    if t.d == 0:
        return canonicalize(t.with_(h=t.h - 1))
    acc = Acc()
    for mu in enumerate_partitions(t.d):
        acc.add(canonicalize(t.with_(h=t.h - 1, profiles=t.profiles + (mu, mu))), zfactor(mu))
    return acc.freeze()


def _shift_handles(x: Insertion) -> Insertion:
    return Insertion(x.desc, CohVector({CohSymbol(s.kind, s.handle - 1) if s.is_odd else s: c
                                        for s, c in x.cls.items()}))


def separating_summands(t: BracketTerm) -> list[Summand]:
    """E (genus 1) u X' (genus h-1) degeneration; identity insertions range over subsets."""
    if t.h < 2:
        raise PreconditionError("separating degeneration needs h >= 2; use the rational tail")
    if not t.is_pure:
        raise PreconditionError("expand mixed insertions before degenerating")
    ins = t.insertions
    ident = [i for i, x in enumerate(ins) if x.symbol == ONE]
    fixed_left = [i for i, x in enumerate(ins)
                  if x.symbol == OMEGA or (x.symbol.is_odd and x.symbol.handle == 1)]
    right_odd = [i for i, x in enumerate(ins) if x.symbol.is_odd and x.symbol.handle != 1]
    odd = [x.symbol.is_odd for x in ins]
    out = []
    parts = enumerate_partitions(t.d) if t.d else []
    for k in range(len(ident) + 1):
        for sub in itertools.combinations(ident, k):
            left_idx = sorted(set(sub) | set(fixed_left))
            right_idx = sorted(set(ident) - set(sub)) + right_odd
            sgn = shuffle_sign(left_idx + right_idx, odd) * t.sign
            left_ins = tuple(ins[i] for i in left_idx)
            right_ins = tuple(_shift_handles(ins[i]) for i in right_idx)
            for r1 in range(t.r + 1):
                for mu in parts:
                    left = BracketTerm(1, t.d, t.profiles + (mu,), left_ins, r1)
                    right = BracketTerm(t.h - 1, t.d, (mu,), right_ins, t.r - r1)
                    out.append(Summand(Fraction(sgn * zfactor(mu)), left, right, len(mu)))
    return out


def degenerate_separating(t: BracketTerm) -> ClassExpr:
    acc = Acc()
    for s in separating_summands(t):
        acc.add(s.expr())
    return acc.freeze()


def rational_tail_summands(t: BracketTerm, omega=None, relative=None, tail=()) -> list[Summand]:
    """Degenerate a genus-1 target to X u P^1, moving insertions to the rational tail.

    ``omega`` selects insertion indices to move (default: every point-class
    insertion), ``relative`` selects relative profile indices (default: all),
    ``tail`` is an extra even monomial placed on the tail.  Identity
    insertions are distributed over all subsets and the dimension over all
    splits.
    """
    if t.h != 1:
        raise PreconditionError("rational-tail degeneration is for genus-1 targets")
    if not t.is_pure:
        raise PreconditionError("expand mixed insertions before degenerating")
    ins = tuple(t.insertions) + tuple(tail)
    if omega is None:
        omega = [i for i, x in enumerate(ins) if x.symbol == OMEGA]
    else:
        omega = list(omega) + list(range(len(t.insertions), len(ins)))
    for i in omega:
        if ins[i].symbol.is_odd:
            raise PreconditionError("odd insertions cannot move to the rational tail")
    if relative is None:
        relative = list(range(len(t.profiles)))
    ident = [i for i, x in enumerate(ins) if x.symbol == ONE and i not in omega]
    stay = [i for i in range(len(ins)) if i not in omega and i not in ident]
    odd = [x.symbol.is_odd for x in ins]
    keep_prof = tuple(p for j, p in enumerate(t.profiles) if j not in relative)
    move_prof = tuple(t.profiles[j] for j in relative)
    out = []
    for k in range(len(ident) + 1):
        for sub in itertools.combinations(ident, k):
            left_idx = sorted(set(sub) | set(stay))
            right_idx = sorted((set(ident) - set(sub)) | set(omega))
            sgn = shuffle_sign(left_idx + right_idx, odd) * t.sign
            left_ins = tuple(ins[i] for i in left_idx)
            right_ins = tuple(ins[i] for i in right_idx)
            for r1 in range(t.r + 1):
                for eta in enumerate_partitions(t.d):
                    left = BracketTerm(1, t.d, keep_prof + (eta,), left_ins, r1)
                    right = BracketTerm(0, t.d, move_prof + (eta,), right_ins, t.r - r1)
                    out.append(Summand(Fraction(sgn * zfactor(eta)), left, right, len(eta)))
    return out


def degenerate_rational_tail(t: BracketTerm, omega=None, relative=None, tail=()) -> ClassExpr:
    acc = Acc()
    for s in rational_tail_summands(t, omega, relative, tail):
        acc.add(s.expr())
    return acc.freeze()
