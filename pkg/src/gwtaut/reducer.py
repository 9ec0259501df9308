"""Reduction of brackets to presentations by base atoms and gluing nodes.

Pipeline for one canonical bracket:

* genus 0: already a base atom;
* only even insertions: irreducible-node degeneration down to P^1;
* genus >= 2: separating degeneration, one handle per step;
* genus 1 and unbalanced: zero, with a monodromy certificate on request;
* genus 1 and balanced: rational tail to a single relative point, then the
  elimination of balanced families (elliptic relations combined with summed
  monodromy relations) followed by inversion of the gamma matrix.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .brackets import (TILDE, Acc, BaseAtom, BracketTerm, ClassExpr, Insertion, ZERO,
                       canonical_atom, canonicalize, glue, map_classes, odd_type)
from .cohomology import ALPHA_KIND, BETA_KIND, OMEGA, ONE, alpha, apply_sl2, beta
from .degeneration import (degenerate_irreducible, rational_tail_summands,
                           separating_summands)
from .p1eval import DEFAULT_CONFIG, EvalConfig, eval_bracket, find_tilde_tau
from .partitions import enumerate_partitions
from .relations import (SetPartitionSpec, elliptic_terms, monodromy_relation,
                        monodromy_term, raw_monodromy_relation)


class ReductionError(RuntimeError):
    """An internal invariant of the elimination failed."""


class DeterminationFailure(RuntimeError):
    pass


class PreconditionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# coefficient identities


def pascal_inverse(n: int) -> list[list[Fraction]]:
    """Inverse of R_ab = C(a, b): entries (-1)^(a+b) C(a, b)."""
    return [[Fraction((-1) ** (a + b) * math.comb(a, b)) for b in range(n + 1)]
            for a in range(n + 1)]


def pascal(n: int) -> list[list[Fraction]]:
    return [[Fraction(math.comb(a, b)) for b in range(n + 1)] for a in range(n + 1)]


def solve_linalg(n: int) -> list[Fraction]:
    """Coefficients c with V = sum_l c_l R(l), V = sum_k (-1)^(n-k) k!(n-k)! e_k."""
    if n < 1:
        raise ValueError("n must be >= 1")
    v = [Fraction((-1) ** (n - k) * math.factorial(k) * math.factorial(n - k))
         for k in range(n + 1)]
    inv = pascal_inverse(n)
    return [sum((inv[l][k] * v[k] for k in range(n + 1)), Fraction(0)) for l in range(n + 1)]


def elimination_coefficients(b: int) -> list[Fraction]:
    """c_i = (b + 1) C(b, i)."""
    return [Fraction((b + 1) * math.comb(b, i)) for i in range(b + 1)]


def elimination_identity(b: int) -> bool:
    """Check C(S) = sum_i (-1)^(i+b) c_i^-1 sum_{|T n S| = i} R(T) with R(T) = sum_{S' c T} C(S')."""
    slots = range(2 * b + 1)
    c = elimination_coefficients(b)
    Ts = [frozenset(T) for T in itertools.combinations(slots, b + 1)]
    for S in itertools.combinations(slots, b):
        S = frozenset(S)
        acc: Counter = Counter()
        for T in Ts:
            i = len(T & S)
            w = Fraction((-1) ** (i + b)) / c[i]
            for Sp in itertools.combinations(sorted(T), b):
                acc[frozenset(Sp)] += w
        acc = {k: v for k, v in acc.items() if v}
        if acc != {S: 1}:
            return False
    return True


# ---------------------------------------------------------------------------
# bookkeeping


@dataclass(frozen=True)
class EliminationState:
    """Position of a balanced family in the induction order."""

    odd: int
    r: int
    s: int
    t: int
    M: tuple  # sorted identity levels

    def below(self, other: "EliminationState") -> bool:
        """Strictly smaller: fewer odd insertions, or (r, s, t, M) <= with inequality."""
        if self.odd != other.odd:
            return self.odd < other.odd
        mine, theirs = Counter(self.M), Counter(other.M)
        divides = all(theirs[k] >= v for k, v in mine.items())
        le = self.r <= other.r and self.s <= other.s and self.t <= other.t and divides
        return le and self != other

    def to_json(self):
        return {"odd": self.odd, "r": self.r, "s": self.s, "t": self.t,
                "M": [str(x) for x in self.M]}


@dataclass
class ReducerConfig:
    eval: EvalConfig = field(default_factory=lambda: DEFAULT_CONFIG)
    max_sigma: int = 6  # |I| cap for the bijection sum
    sign: str = "auto"  # global sign of the combined elliptic relation: auto | +1 | -1
    tilde: str = TILDE
    trace: bool = False


def _lvl_key(lv):
    return (0, lv, "") if isinstance(lv, int) else (1, 0, lv)


def _is_special(lv) -> bool:
    return isinstance(lv, int)


@dataclass(frozen=True)
class Certificate:
    """Monodromy certificate that an unbalanced bracket vanishes."""

    target: BracketTerm
    b: int
    relations: tuple  # ((coeff, T, Relation), ...)
    matrix: tuple

    def combination(self) -> ClassExpr:
        acc = Acc()
        for c, _, rel in self.relations:
            acc.add(rel.expr, c)
        return acc.freeze()

    def verify(self) -> bool:
        """sum c_T R(T) = target modulo brackets of strictly lower unbalanced type."""
        residual = self.combination() - ClassExpr.atom(self.target)
        for a in residual:
            x, y = odd_type(a)
            if x == y or min(x, y) >= self.b:
                return False
        return True

    def to_json(self) -> dict:
        return {"target": self.target.render(), "b": self.b,
                "terms": [{"coeff": str(c), "T": sorted(T), "relation": rel.to_json()}
                          for c, T, rel in self.relations]}


# ---------------------------------------------------------------------------


class Reducer:
    """Memoizing driver; one instance owns its memo tables."""

    def __init__(self, config: ReducerConfig | None = None):
        self.config = config or ReducerConfig()
        self.memo: dict = {}
        self.even_memo: dict = {}
        self.stack: list = []
        self.trace: list = []
        self.certificates: dict = {}
        self.visited_states: list = []

    # -- public -----------------------------------------------------------

    def reduce(self, t) -> ClassExpr:
        """Tautological presentation: a ClassExpr of BaseAtoms and Glue nodes."""
        expr = canonicalize(t) if isinstance(t, BracketTerm) else t
        acc = Acc()
        for a, c in expr.items():
            if isinstance(a, BracketTerm):
                acc.add(self.reduce_atom(a), c)
            else:
                acc.add(a, c)
        return acc.freeze()

    def reduce_atom(self, t: BracketTerm) -> ClassExpr:
        if t in self.memo:
            return self.memo[t]
        if t.h == 0:
            out = ClassExpr.atom(BaseAtom(t))
        elif t.is_even:
            out = self.reduce_even(t)
        elif t.h >= 2:
            out = self.reduce_genus(t)
        else:
            a, b = odd_type(t)
            if a != b:
                out = ZERO
                if self.config.trace:
                    _, cert = self.reduce_unbalanced(t)
                    self._log("unbalanced", term=t.render(), type=[a, b],
                              certificate=cert.to_json() if cert else None)
            else:
                out = self.reduce_balanced(t)
        self.memo[t] = out
        return out

    # -- even -------------------------------------------------------------

    def reduce_even(self, t: BracketTerm) -> ClassExpr:
        if not t.is_even:
            raise PreconditionError("reduce_even needs even insertions")
        expr = canonicalize(t) if not t.is_pure or t.sign != 1 else ClassExpr.atom(t)
        acc = Acc()
        for a, c in expr.items():
            acc.add(self._even_atom(a), c)
        return acc.freeze()

    def _even_atom(self, t: BracketTerm) -> ClassExpr:
        if t.h == 0:
            return ClassExpr.atom(BaseAtom(t))
        if t in self.even_memo:
            return self.even_memo[t]
        acc = Acc()
        for a, c in degenerate_irreducible(t).items():
            acc.add(self._even_atom(a), c)
        out = acc.freeze()
        self.even_memo[t] = out
        return out

    # -- genus >= 2 -------------------------------------------------------

    def reduce_genus(self, t: BracketTerm) -> ClassExpr:
        if t.h < 2:
            raise PreconditionError("reduce_genus needs h >= 2")
        acc = Acc()
        for s in separating_summands(t):
            left = self.reduce(s.left)
            if not left:
                continue
            right = self.reduce(s.right)
            if right:
                acc.add(glue(left, right, s.ell), s.coeff)
        return acc.freeze()

    # -- unbalanced -------------------------------------------------------

    def reduce_unbalanced(self, t: BracketTerm) -> tuple[ClassExpr, Certificate | None]:
        if t.h != 1:
            raise PreconditionError("unbalanced elimination is stated for genus-1 targets")
        a, b = odd_type(t)
        if a == b:
            raise PreconditionError("balanced input: use reduce_balanced")
        expr = canonicalize(t)
        if not expr:
            return ZERO, None
        (atom, _), = expr.items()
        cert = unbalanced_certificate(atom)
        self.certificates[atom] = cert
        return ZERO, cert

    # -- balanced genus one ----------------------------------------------

    def reduce_balanced(self, t: BracketTerm) -> ClassExpr:
        if t.h != 1:
            raise PreconditionError("reduce_balanced needs a genus-1 target")
        a, b = odd_type(t)
        if a != b or a == 0:
            raise PreconditionError("reduce_balanced needs a balanced odd type (k, k), k >= 1")
        has_omega = any(x.symbol == OMEGA for x in t.insertions)
        if len(t.profiles) == 1 and not has_omega:
            self.determine_relative(t)
            if t not in self.memo:
                raise ReductionError(f"family solve did not determine {t.render()}")
            return self.memo[t]
        acc = Acc()
        for s in rational_tail_summands(t):
            sl, left = canonical_atom(s.left)
            if not sl:
                continue
            sr, right = canonical_atom(s.right)
            if not sr:
                continue
            lx = self.reduce_atom(left)
            if lx:
                acc.add(glue(lx, ClassExpr.atom(BaseAtom(right)), s.ell), s.coeff * sl * sr)
        return acc.freeze()

    def _split(self, t: BracketTerm):
        M = tuple(x for x in t.insertions if x.symbol == ONE)
        A = tuple(x.level for x in t.insertions if x.symbol == alpha(1))
        B = tuple(x.level for x in t.insertions if x.symbol == beta(1))
        return M, A, B

    def _state(self, M, A, B, r) -> EliminationState:
        return EliminationState(2 * len(A), r, sum(map(_is_special, A)), sum(map(_is_special, B)),
                                tuple(sorted((x.level for x in M), key=_lvl_key)))

    def _push(self, state: EliminationState):
        if self.stack and not state.below(self.stack[-1]):
            raise ReductionError(f"induction order violated: {state} not below {self.stack[-1]}")
        self.stack.append(state)
        self.visited_states.append((self.stack[-2] if len(self.stack) > 1 else None, state))

    def determine_relative(self, t: BracketTerm) -> None:
        """Solve the family [M A B | eta]_r for every eta."""
        M, A, B = self._split(t)
        r, d = t.r, t.d
        state = self._state(M, A, B, r)
        self._push(state)
        try:
            self._determine_relative(M, A, B, r, d)
        finally:
            self.stack.pop()

    def _determine_relative(self, M, A, B, r, d):
        tau = find_tilde_tau(d, self.config.eval.max_q, self.config.eval.max_degree)
        parts = enumerate_partitions(d)
        odd_ins = tuple(Insertion.pure(l, alpha(1)) for l in A) + \
            tuple(Insertion.pure(l, beta(1)) for l in B)
        cols = []
        col_atom = {}
        for eta in parts:
            s, atom = canonical_atom(BracketTerm(1, d, (eta,), M + odd_ins, r))
            if s:
                cols.append(eta)
                col_atom[eta] = (s, atom)
        if not cols:
            return
        rows_P, rows_rhs = [], []
        for v in tau.rows:
            seed = BracketTerm(1, d, (), M + tuple(Insertion.pure(self.config.tilde, OMEGA)
                                                   for _ in range(v)) + odd_ins, r)
            seed_val = self.seed_value(seed)
            coeffs = {eta: Fraction(0) for eta in cols}
            rhs = Acc()
            rhs.add(seed_val)
            for sm in rational_tail_summands(seed):
                sl, left = canonical_atom(s_left := sm.left)
                if not sl:
                    continue
                principal = left.r == r and not any(x.symbol == ONE for x in sm.right.insertions)
                if principal:
                    eta = s_left.profiles[-1]
                    val = eval_bracket(sm.right, self.config.eval)
                    if eta not in col_atom:
                        continue
                    s_col, atom = col_atom[eta]
                    if atom != left:
                        raise ReductionError("principal term does not match the family column")
                    coeffs[eta] += sm.coeff * sl * val
                else:
                    sr, right = canonical_atom(sm.right)
                    if not sr:
                        continue
                    lx = self.reduce_atom(left)
                    if lx:
                        rhs.add(glue(lx, ClassExpr.atom(BaseAtom(right)), sm.ell),
                                -sm.coeff * sl * sr)
            rows_P.append([coeffs[eta] for eta in cols])
            rows_rhs.append(rhs.freeze())
        chosen = _independent_rows(rows_P, len(cols))
        if chosen is None:
            raise DeterminationFailure(f"gamma system singular for d={d}")
        P = [rows_P[i] for i in chosen]
        Pinv = linalg.inverse(P)
        for j, eta in enumerate(cols):
            acc = Acc()
            for jj, i in enumerate(chosen):
                acc.add(rows_rhs[i], Pinv[j][jj])
            _, atom = col_atom[eta]
            self.memo[atom] = acc.freeze()
        if self.config.trace:
            self._log("absrel", family=[str(x) for x in cols], rows=list(tau.rows),
                      chosen=chosen, d=d, r=r)

    # -- elliptic elimination ---------------------------------------------

    def seed_value(self, seed: BracketTerm) -> ClassExpr:
        """Value of [M tilde(w)^v A B]_{r,d} from the combined elliptic relation."""
        s0, atom = canonical_atom(seed)
        if not s0:
            return ZERO
        key = ("seed", atom)
        if key in self.memo:
            return self.memo[key].scale(s0)
        M = tuple(x for x in seed.insertions if x.symbol == ONE)
        v = sum(1 for x in seed.insertions if x.symbol == OMEGA)
        A = sorted((x.level for x in seed.insertions if x.symbol == alpha(1)),
                   key=lambda l: (not _is_special(l), _lvl_key(l)))
        B = sorted((x.level for x in seed.insertions if x.symbol == beta(1)),
                   key=lambda l: (not _is_special(l), _lvl_key(l)))
        k = len(A)
        if k > self.config.max_sigma:
            raise DeterminationFailure(f"|I| = {k} exceeds the bijection-sum cap")
        d, r = seed.d, seed.r
        tl = self.config.tilde
        s_cnt, t_cnt = sum(map(_is_special, A)), sum(map(_is_special, B))
        levels = list(A) + [tl] * v + list(B)
        I = list(range(k))
        W = list(range(k, k + v))
        J = list(range(k + v, 2 * k + v))
        N = M + tuple(Insertion.pure(tl, OMEGA) for _ in range(v))

        # e_j and the summed monodromy relations
        e = [Acc() for _ in range(k + 1)]
        remaining = set()
        for D in itertools.combinations(range(2 * k), k):
            D = set(D)
            term = monodromy_term(N, A, B, D, d=d, r=r)
            ex = canonicalize(term)
            e[len(D & set(I))].add(ex)
            remaining.update(ex)
        e = [x.freeze() for x in e]
        R = []
        for ell in range(k):
            acc = Acc()
            for delta in itertools.combinations(I, ell):
                acc.add(monodromy_relation(N, A, B, delta, d=d, r=r).expr)
            R.append(acc.freeze())

        V = Acc()
        known = Acc()
        sgn_binom = (-1) ** math.comb(k, 2)
        for sigma in itertools.permutations(range(k)):
            parts = [tuple([I[0], J[sigma[0]]] + W)] + [(I[i], J[sigma[i]]) for i in range(1, k)]
            n_special = int(s_cnt > 0) + int(sigma[0] < t_cnt)
            C = {2: 1, 1: v + 1, 0: math.comb(v + 2, 2)}[n_special]
            w = Fraction(sgn_binom * _perm_sign(sigma), C)
            for c, term in elliptic_terms(M, SetPartitionSpec(parts), levels, d=d, r=r):
                for a, cc in canonicalize(term).items():
                    if a in remaining:
                        V.add(a, w * c * cc)
                    else:
                        known.add(self.reduce_atom(a), w * c * cc)
        V = V.freeze()
        c = solve_linalg(k) if k >= 1 else [Fraction(1)]
        combo = Acc()
        for ell in range(k):
            combo.add(R[ell], c[ell])
        combo.add(e[k], c[k])
        combo = combo.freeze()
        eps = self._match_sign(V, combo)
        if eps is None:
            raise ReductionError(
                f"combined elliptic relation does not match the monodromy basis for {seed.render()}")
        # V + known = 0 and R(l) = 0 give eps * c_k * e_k = -known
        value_ek = known.freeze().scale(Fraction(-eps) / c[k])
        if len(e[k]) != 1 or atom not in e[k]:
            raise ReductionError("target bracket is not the top elimination vector")
        val = value_ek.scale(Fraction(1) / e[k][atom])
        self.memo[key] = val
        if self.config.trace:
            self._log("elliptic", seed=seed.render(), sign=eps, c=[str(x) for x in c],
                      sigmas=math.factorial(k))
        return val.scale(s0)

    def _match_sign(self, V: ClassExpr, combo: ClassExpr):
        mode = self.config.sign
        options = (1, -1) if mode == "auto" else (int(mode),)
        for eps in options:
            if V == combo.scale(eps):
                return eps
        return None

    def _log(self, kind, **data):
        data["op"] = kind
        data["state"] = self.stack[-1].to_json() if self.stack else None
        self.trace.append(data)


def _perm_sign(p) -> int:
    inv = sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])
    return -1 if inv % 2 else 1


def _independent_rows(rows, n):
    """Greedy choice of n row indices spanning an invertible n x n block."""
    chosen = []
    for i in range(len(rows)):
        if linalg.rank([rows[j] for j in chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
        if len(chosen) == n:
            return chosen
    return None


# ---------------------------------------------------------------------------
# unbalanced certificates


def unbalanced_certificate(t: BracketTerm) -> Certificate:
    """Monodromy relations R(T) exhibiting the canonical unbalanced atom t as zero."""
    a, b = odd_type(t)
    if a > b:
        big, small, matrix = ALPHA_KIND, BETA_KIND, ((1, 0), (1, 1))
    else:
        big, small, matrix = BETA_KIND, ALPHA_KIND, ((1, 1), (0, 1))
    m = min(a, b)
    ins = list(t.insertions)
    small_pos = [i for i, x in enumerate(ins) if x.symbol.is_odd and x.symbol.kind == small]
    big_pos = [i for i, x in enumerate(ins) if x.symbol.is_odd and x.symbol.kind == big]
    slots = sorted(small_pos + big_pos[:m + 1])
    sym = {ALPHA_KIND: alpha(1), BETA_KIND: beta(1)}

    def with_small(S):
        new = list(ins)
        for i in slots:
            new[i] = Insertion.pure(ins[i].level, sym[small] if i in S else sym[big])
        return t.with_(insertions=tuple(new))

    S0 = set(small_pos)
    c = elimination_coefficients(m)
    terms = []
    for T in itertools.combinations(slots, m + 1):
        i = len(set(T) & S0)
        w = Fraction((-1) ** (i + m)) / c[i]
        rel = raw_monodromy_relation(with_small(set(T)), matrix)
        terms.append((w, tuple(T), rel))
    return Certificate(t, m, tuple(terms), matrix)


# ---------------------------------------------------------------------------
# simple case in closed form


def simple_case_summands(M, n: int, v: int, *, d: int, r: int, tilde: str = TILDE):
    """Odd sector of V(M, {K_v}, l) with l = (psi^n, tilde, ..., tilde).

    Returns (machinery, closed_form): the canonical odd sector produced by the
    relation generator and the four-summand closed form, as ClassExprs.
    """
    levels = [n] + [tilde] * (v + 1)
    rel_terms = elliptic_terms(tuple(M), SetPartitionSpec([tuple(range(v + 2))]), levels,
                               d=d, r=r, odd_only=True)
    mach = Acc()
    for c, t in rel_terms:
        mach.add(canonicalize(t), c)
    T = lambda lv, s: Insertion.pure(lv, s)  # noqa: E731
    w = [T(tilde, OMEGA)]
    br = lambda *xs: BracketTerm(1, d, (), tuple(M) + tuple(xs), r)  # noqa: E731
    disp = Acc()
    disp.add(canonicalize(br(*(w * v), T(n, alpha(1)), T(tilde, beta(1)))), -(v + 1))
    disp.add(canonicalize(br(*(w * v), T(n, beta(1)), T(tilde, alpha(1)))), v + 1)
    if v >= 1:
        cc = math.comb(v + 1, 2)
        disp.add(canonicalize(br(*(w * (v - 1)), T(n, OMEGA), T(tilde, alpha(1)),
                                 T(tilde, beta(1)))), -cc)
        disp.add(canonicalize(br(*(w * (v - 1)), T(n, OMEGA), T(tilde, beta(1)),
                                 T(tilde, alpha(1)))), cc)
    return mach.freeze(), disp.freeze()



def reduce(t, config: ReducerConfig | None = None) -> ClassExpr:
    return Reducer(config).reduce(t)
