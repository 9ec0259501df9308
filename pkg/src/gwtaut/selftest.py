"""Acceptance suite: one function per criterion, each returning a CriterionResult."""

from __future__ import annotations

import functools
import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .brackets import (BracketTerm, Insertion, ZERO, canonical_atom, canonicalize, map_classes)
from .cohomology import OMEGA, ONE, PHI, alpha, apply_sl2, beta, diagonal
from .p1eval import (NotEvaluable, eval_bracket, eval_p1_relative, evaluate_expr,
                     find_tilde_tau, hurwitz_bruteforce)
from .partitions import enumerate_partitions, zfactor
from .reducer import (Reducer, elimination_identity, pascal, pascal_inverse,
                      simple_case_summands, solve_linalg)

S_MATRIX = ((0, 1), (-1, 0))


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float
    detail: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds < self.limit

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "" if self.passed else f" ({self.detail.get('reason', 'check failed')})"
        return f"criterion {self.number} [{status}] {self.name}: {self.seconds:.2f}s / {self.limit:g}s{extra}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.ok,
                "checks_passed": self.passed, "seconds": round(self.seconds, 3),
                "limit": self.limit, "detail": self.detail}


def _timed(number: int, name: str, limit: float):
    def wrap(fn):
        @functools.wraps(fn)
        def run() -> CriterionResult:
            t0 = time.perf_counter()
            try:
                passed, detail = fn()
            except Exception as e:  # report, do not crash the suite
                passed, detail = False, {"reason": f"{type(e).__name__}: {e}"}
            return CriterionResult(number, name, passed, time.perf_counter() - t0, limit, detail)
        run.number = number
        return run
    return wrap


def _pure(level, sym) -> Insertion:
    return Insertion.pure(level, sym)


# ---------------------------------------------------------------------------


@_timed(1, "Pascal inverse and the elimination coefficients", 1.0)
def criterion_1():
    for n in range(11):
        if linalg.matmul(pascal(n), pascal_inverse(n)) != linalg.identity(n + 1):
            return False, {"reason": f"R * R^-1 != I for n={n}"}
    for n in range(1, 11):
        c = solve_linalg(n)
        if c[-1] != math.factorial(n + 1):
            return False, {"reason": f"c_n = {c[-1]} for n={n}"}
        # V = sum_l c_l R(l) in the e-basis
        for k in range(n + 1):
            lhs = (-1) ** (n - k) * math.factorial(k) * math.factorial(n - k)
            if sum(c[l] * math.comb(k, l) for l in range(k + 1)) != lhs:
                return False, {"reason": f"expansion mismatch n={n}, k={k}"}
    return True, {"n_max": 10}


@_timed(2, "unbalanced elimination identity", 5.0)
def criterion_2():
    for b in range(5):
        if not elimination_identity(b):
            return False, {"reason": f"identity fails for b={b}"}
    return True, {"b_max": 4}


def unbalanced_inputs():
    """Canonical unbalanced genus-1 brackets: a+b <= 5, d <= 3, levels <= 3."""
    out = []
    for d in (1, 2, 3):
        profile_sets = [()] + [(p,) for p in enumerate_partitions(d)]
        for a in range(6):
            for b in range(6 - a):
                if a == b:
                    continue
                for la in itertools.combinations_with_replacement(range(4), a):
                    for lb in itertools.combinations_with_replacement(range(4), b):
                        ins = tuple(_pure(l, alpha(1)) for l in la) + \
                            tuple(_pure(l, beta(1)) for l in lb)
                        for profs in profile_sets:
                            for r in range(4):
                                s, t = canonical_atom(BracketTerm(1, d, profs, ins, r))
                                if s:
                                    out.append(t)
    return out


@_timed(3, "unbalanced brackets vanish with certificates", 60.0)
def criterion_3():
    red = Reducer()
    inputs = unbalanced_inputs()
    for t in inputs:
        if red.reduce(t) != ZERO:
            return False, {"reason": f"nonzero reduction of {t.render()}"}
        _, cert = red.reduce_unbalanced(t)
        if cert is None or not cert.verify():
            return False, {"reason": f"certificate fails for {t.render()}"}
    return True, {"inputs": len(inputs)}


def _word(*syms):
    table = {"1": ONE, "w": OMEGA, "a": alpha(1), "b": beta(1)}
    return tuple(table[s] for s in syms)


REFERENCE_DIAGONAL_2 = {_word("1", "w"): 1, _word("w", "1"): 1, _word("a", "b"): -1,
                      _word("b", "a"): 1}
REFERENCE_DIAGONAL_3 = {
    _word("1", "w", "w"): 1, _word("w", "1", "w"): 1, _word("w", "w", "1"): 1,
    _word("w", "a", "b"): -1, _word("w", "b", "a"): 1,
    _word("a", "w", "b"): -1, _word("b", "w", "a"): 1,
    _word("a", "b", "w"): -1, _word("b", "a", "w"): 1,
}


@_timed(4, "Kunneth decomposition of the small diagonal", 1.0)
def criterion_4():
    if dict(diagonal(2).items()) != REFERENCE_DIAGONAL_2:
        return False, {"reason": "diagonal(2) differs from the reference expansion"}
    if dict(diagonal(3).items()) != REFERENCE_DIAGONAL_3:
        return False, {"reason": "diagonal(3) differs from the reference expansion"}
    for r in range(2, 7):
        D = diagonal(r)
        if len(D) != r + 2 * math.comb(r, 2):
            return False, {"reason": f"term count for r={r}"}
        for i, j in itertools.combinations(range(r), 2):
            if D.swap_slots(i, j) != D:
                return False, {"reason": f"slot swap ({i},{j}) for r={r}"}
    return True, {"r_max": 6}


def even_stationary_inputs():
    """Even genus-1 and genus-2 brackets at r=0 with d <= 3 and total level <= 4."""
    out = []
    for h in (1, 2):
        for d in (1, 2, 3):
            profile_sets = [()] + [(p,) for p in enumerate_partitions(d)]
            for n in range(0, 4):
                for levels in itertools.combinations_with_replacement(range(5), n):
                    if sum(levels) > 4:
                        continue
                    ins = tuple(_pure(l, OMEGA) for l in levels)
                    for profs in profile_sets:
                        s, t = canonical_atom(BracketTerm(h, d, profs, ins, 0))
                        if s:
                            out.append(t)
    return out


@_timed(5, "degeneration and gluing consistency at r=0", 60.0)
def criterion_5():
    # tube normalization
    for d in (1, 2, 3):
        for mu in enumerate_partitions(d):
            for nu in enumerate_partitions(d):
                want = Fraction(1, zfactor(mu)) if mu == nu else Fraction(0)
                if eval_p1_relative((), (mu, nu)) != want:
                    return False, {"reason": f"tube {mu}|{nu}"}
    # splitting a P^1 into two P^1 composes through the tube weights
    checked = 0
    for d in (1, 2, 3):
        for levels in itertools.combinations_with_replacement(range(5), 3):
            if sum(levels) > 4:
                continue
            whole = eval_p1_relative(levels, (), d=d)
            for cut in range(len(levels) + 1):
                glued = sum((zfactor(mu) * eval_p1_relative(levels[:cut], (mu,))
                             * eval_p1_relative(levels[cut:], (mu,))
                             for mu in enumerate_partitions(d)), Fraction(0))
                if glued != whole:
                    return False, {"reason": f"gluing at cut {cut} for levels {levels}, d={d}"}
                checked += 1
    # character sum on the curve vs degeneration to P^1
    red = Reducer()
    inputs = even_stationary_inputs()
    for t in inputs:
        direct = eval_bracket(t)
        via = evaluate_expr(red.reduce_even(t))
        if direct != via:
            return False, {"reason": f"{t.render()}: direct {direct} vs degenerate {via}"}
    return True, {"brackets": len(inputs), "gluings": checked}


def _profile_multisets(d: int, max_count: int):
    parts = enumerate_partitions(d)
    for n in range(1, max_count + 1):
        yield from itertools.combinations_with_replacement(parts, n)


@_timed(6, "Hurwitz oracle: enumeration vs Frobenius formula", 30.0)
def criterion_6():
    count = 0
    for d in range(1, 6):
        for profs in _profile_multisets(d, 4):
            a = hurwitz_bruteforce(d, profs, method="enumerate")
            b = hurwitz_bruteforce(d, profs, method="frobenius")
            if a != b:
                return False, {"reason": f"d={d}, {profs}: {a} vs {b}"}
            count += 1
    return True, {"profile_lists": count}


@_timed(7, "refined descendent with full-rank certificate", 30.0)
def criterion_7():
    ranks = {}
    for d in range(1, 5):
        tau = find_tilde_tau(d)
        n = len(enumerate_partitions(d))
        gamma = [[tau.gamma[v][j] for j in range(n)] for v in tau.rows]
        if tau.rank != n or linalg.rank(gamma) != n:
            return False, {"reason": f"rank {tau.rank} != {n} for d={d}"}
        ranks[d] = tau.rank
    return True, {"ranks": ranks}


def balanced_inputs():
    """Canonical balanced genus-1 brackets with <= 4 odd insertions and d <= 2."""
    out = []
    extras = [(), (_pure(0, ONE),), (_pure(0, OMEGA),), (_pure(1, OMEGA),)]
    for d in (1, 2):
        profile_sets = [(), ((d,),), ((1,) * d,)]
        for k, lmax in ((1, 2), (2, 1)):
            for la in itertools.combinations_with_replacement(range(lmax + 1), k):
                for lb in itertools.combinations_with_replacement(range(lmax + 1), k):
                    odd = tuple(_pure(l, alpha(1)) for l in la) + \
                        tuple(_pure(l, beta(1)) for l in lb)
                    for ex in extras:
                        for profs in profile_sets:
                            for r in (0, 1):
                                if k == 2 and (r or profs and d == 2):
                                    continue
                                s, t = canonical_atom(BracketTerm(1, d, profs, ex + odd, r))
                                if s:
                                    out.append(t)
    return out


def _evaluate_canonical(red: Reducer, t: BracketTerm) -> Fraction:
    return sum((c * evaluate_expr(red.reduce(a)) for a, c in canonicalize(t).items()),
               Fraction(0))


@functools.lru_cache(maxsize=1)
def _monodromy_run():
    red = Reducer()
    inputs = balanced_inputs()
    failures, numeric, skipped = [], 0, 0
    for t in inputs:
        moved = map_classes(t, lambda v: apply_sl2(PHI, 1, v))
        if red.reduce(moved) != red.reduce(t):
            failures.append(f"phi: {t.render()}")
            continue
        if t.r == 0:
            try:
                v0 = _evaluate_canonical(red, t)
                v1 = _evaluate_canonical(red, moved)
                v2 = _evaluate_canonical(red, map_classes(t, lambda v: apply_sl2(S_MATRIX, 1, v)))
            except NotEvaluable:
                skipped += 1
                continue
            if not v0 == v1 == v2:
                failures.append(f"r=0 values {t.render()}: {v0}, {v1}, {v2}")
            numeric += 1
    return inputs, failures, numeric, skipped, tuple(red.visited_states)


@_timed(8, "monodromy invariance end to end", 120.0)
def criterion_8():
    inputs, failures, numeric, skipped, _ = _monodromy_run()
    if failures:
        return False, {"reason": failures[0], "failures": len(failures)}
    return True, {"inputs": len(inputs), "numeric_checks": numeric,
                  "not_evaluable": skipped}


@_timed(9, "simple-case decomposition and terminating recursion", 120.0)
def criterion_9():
    for v in range(4):
        for n in range(3):
            for M in ((), (_pure(0, ONE),), (_pure(1, ONE), _pure(0, ONE))):
                mach, disp = simple_case_summands(M, n, v, d=2, r=3)
                if mach != disp:
                    return False, {"reason": f"simple case v={v}, n={n}, |M|={len(M)}"}
    # coefficient check on one explicit instance
    mach, _ = simple_case_summands((), 0, 2, d=1, r=2)
    if sorted(abs(c) for c in mach.values()) != [3, 3, 6]:
        return False, {"reason": f"unexpected coefficients {sorted(mach.values())}"}
    _, failures, _, _, visits = _monodromy_run()
    for parent, child in visits:
        if parent is not None and not child.below(parent):
            return False, {"reason": f"measure did not decrease: {parent} -> {child}"}
    for t in unbalanced_inputs():
        red = Reducer()
        _, cert = red.reduce_unbalanced(t)
        if cert is not None and not cert.verify():
            return False, {"reason": f"unbalanced recursion measure for {t.render()}"}
    return True, {"recursion_steps": len(visits)}


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9)


def run_all(selected=None) -> list[CriterionResult]:
    return [c() for c in CRITERIA if selected is None or c.number in selected]
