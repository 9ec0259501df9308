"""Exact evaluation of dimension-zero brackets through symmetric-group characters.

Disconnected relative invariants of a genus-h target with only point-class
descendents are character sums

    sum_lambda (dim lambda / d!)^(2 - 2h) * prod_i f_eta_i(lambda)
               * prod_j p_(k_j + 1)(lambda) / (k_j + 1)!

with central characters ``f_eta`` and the shifted power sums ``p_k`` of the
completed cycles.  Identity-class insertions at levels 0 and 1 are removed
first with the disconnected string and dilaton equations.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy

from . import linalg
from .brackets import (HALF, TILDE, BaseAtom, BracketTerm, ClassExpr, Glue, Insertion,
                       genus_of)
from .cohomology import OMEGA, ONE
from .partitions import Partition, class_size, enumerate_partitions, zfactor

DEFAULT_MAX_DEGREE = 8


class NotEvaluable(ValueError):
    """The term lies outside what the numeric backend can evaluate."""


class ResourceError(ValueError):
    pass


class SearchFailure(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# characters


def _beta_set(lam: tuple) -> tuple:
    n = len(lam)
    return tuple(lam[i] + (n - 1 - i) for i in range(n))


def _from_beta(beta: tuple) -> tuple:
    b = sorted(beta, reverse=True)
    n = len(b)
    return tuple(x for x in (b[i] - (n - 1 - i) for i in range(n)) if x > 0)


@lru_cache(maxsize=None)
def mn_character(lam: tuple, mu: tuple) -> int:
    """chi^lam at cycle type mu by the Murnaghan-Nakayama rule."""
    if sum(lam) != sum(mu):
        raise ValueError("shape and cycle type sizes differ")
    if not mu:
        return 1
    k, rest = mu[0], mu[1:]
    beta = _beta_set(lam)
    bset = set(beta)
    total = 0
    for b in beta:
        nb = b - k
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for x in beta if nb < x < b)
        new = _from_beta(tuple(nb if x == b else x for x in beta))
        total += (-1) ** height * mn_character(new, rest)
    return total


@dataclass(frozen=True)
class CharacterTable:
    d: int
    partitions: tuple  # row/column order
    table: tuple  # table[i][j] = chi^{lambda_i}(mu_j)

    @property
    def dims(self) -> tuple:
        j = self.partitions.index(Partition((1,) * self.d))
        return tuple(row[j] for row in self.table)

    def chi(self, lam, mu) -> int:
        return self.table[self.partitions.index(Partition(lam))][self.partitions.index(Partition(mu))]


@lru_cache(maxsize=None)
def _characters(d: int) -> CharacterTable:
    parts = tuple(enumerate_partitions(d)) if d else (Partition(()),)
    table = tuple(tuple(mn_character(tuple(l), tuple(m)) for m in parts) for l in parts)
    return CharacterTable(d, parts, table)


def characters(d: int, max_degree: int = DEFAULT_MAX_DEGREE) -> CharacterTable:
    if d > max_degree:
        raise ResourceError(f"degree {d} exceeds the configured cap {max_degree}")
    if d < 0:
        raise ValueError("degree must be non-negative")
    return _characters(d)


# ---------------------------------------------------------------------------
# completed cycles


@lru_cache(maxsize=None)
def _zeta_neg(k: int) -> Fraction:
    # zeta(-k) = -B_{k+1}/(k+1) for k >= 1
    b = sympy.bernoulli(k + 1)
    return -Fraction(int(b.p), int(b.q)) / (k + 1)


@lru_cache(maxsize=None)
def shifted_power_sum(lam: tuple, k: int) -> Fraction:
    """p_k(lam) = sum_i [(lam_i - i + 1/2)^k - (-i + 1/2)^k] + (1 - 2^-k) zeta(-k)."""
    half = Fraction(1, 2)
    s = sum(((l - i + half) ** k - (-i + half) ** k for i, l in enumerate(lam, start=1)),
            Fraction(0))
    return s + (1 - Fraction(1, 2 ** k)) * _zeta_neg(k)


def central_character(lam: tuple, eta: Partition) -> Fraction:
    tab = _characters(sum(lam))
    dim = tab.chi(lam, (1,) * sum(lam))
    return Fraction(class_size(eta) * tab.chi(lam, eta), dim)


def stationary_character_sum(h: int, d: int, profiles, levels) -> Fraction:
    """Character-sum value of a genus-h target bracket with point-class descendents."""
    tab = characters(d, max(DEFAULT_MAX_DEGREE, d))
    fact = math.factorial(d)
    total = Fraction(0)
    for lam, dim in zip(tab.partitions, tab.dims):
        lam = tuple(lam)
        term = Fraction(dim, fact) ** (2 - 2 * h)
        for eta in profiles:
            term *= central_character(lam, Partition(eta)) if d else 1
        for k in levels:
            term *= shifted_power_sum(lam, k + 1) / math.factorial(k + 1)
        total += term
    return total


# ---------------------------------------------------------------------------
# refined descendent profiles


@dataclass
class EvalConfig:
    """Numeric-backend configuration: degree cap and refined descendent profiles."""

    max_degree: int = DEFAULT_MAX_DEGREE
    max_q: int = 3
    # name -> {d: {level: coeff}}; "~" falls back to find_tilde_tau when absent
    profiles: dict = field(default_factory=dict)

    def profile(self, name: str, d: int) -> dict:
        by_d = self.profiles.get(name, {})
        if d in by_d:
            return by_d[d]
        if name == TILDE:
            return find_tilde_tau(d, self.max_q, self.max_degree).coefficients
        raise NotEvaluable(f"no refined descendent profile {name!r} for degree {d}")


DEFAULT_CONFIG = EvalConfig()


def expand_levels(t: BracketTerm, config: EvalConfig = DEFAULT_CONFIG):
    """Yield (coeff, term) with every named level expanded into integer levels."""
    choices = []
    for x in t.insertions:
        if isinstance(x.level, int):
            choices.append([(Fraction(1), x)])
        else:
            prof = config.profile(x.level, t.d)
            choices.append([(Fraction(c), Insertion.pure(q, x.symbol)) for q, c in prof.items()])
    for combo in itertools.product(*choices):
        c = Fraction(t.sign)
        for cc, _ in combo:
            c *= cc
        if c:
            yield c, t.with_(insertions=tuple(x for _, x in combo), sign=1)


def _eval_pure(t: BracketTerm, config: EvalConfig) -> Fraction:
    if t.has_odd:
        raise NotEvaluable("odd insertions have no direct character formula")
    if t.r != 0:
        raise NotEvaluable("only dimension-zero brackets evaluate to numbers")
    g = genus_of(t)
    if g is HALF:
        return Fraction(0)
    ident = [i for i, x in enumerate(t.insertions) if x.symbol == ONE]
    if not ident:
        return t.sign * stationary_character_sum(t.h, t.d, t.profiles,
                                                 [x.level for x in t.insertions])
    p = ident[0]
    k = t.insertions[p].level
    rest = t.insertions[:p] + t.insertions[p + 1:]
    base = t.with_(insertions=rest, sign=1)
    if k == 0:
        # string: lower each level, plus a contracted genus-0 component carrying p, a, b
        total = Fraction(0)
        for i, x in enumerate(rest):
            if x.level >= 1:
                low = rest[:i] + (Insertion.pure(x.level - 1, x.symbol),) + rest[i + 1:]
                total += _eval_pure(base.with_(insertions=low), config)
        for i, j in itertools.combinations(range(len(rest)), 2):
            a, b = rest[i], rest[j]
            if a.level == 0 and b.level == 0 and {a.symbol, b.symbol} == {ONE, OMEGA}:
                rem = tuple(x for m, x in enumerate(rest) if m not in (i, j))
                total += _eval_pure(base.with_(insertions=rem), config)
        return t.sign * total
    if k == 1:
        chi_log = 2 - 2 * t.h - len(t.profiles)
        n = len(rest)
        ell = sum(len(mu) for mu in t.profiles)
        factor = 2 * g - 2 + n + ell + Fraction(chi_log, 24)
        return t.sign * factor * _eval_pure(base, config)
    raise NotEvaluable(f"identity descendent t{k}(1) with k >= 2 is not supported numerically")


def eval_bracket(t: BracketTerm, config: EvalConfig = DEFAULT_CONFIG) -> Fraction:
    """Exact value of an even dimension-zero bracket (any target genus)."""
    if t.d > config.max_degree:
        raise ResourceError(f"degree {t.d} exceeds the configured cap {config.max_degree}")
    total = Fraction(0)
    for c, pure in expand_levels(t, config):
        total += c * _eval_pure(pure, config)
    return total


def eval_p1_relative(levels, profiles, r: int = 0, d: int | None = None,
                     config: EvalConfig = DEFAULT_CONFIG) -> Fraction:
    """Stationary relative P^1 invariant <prod t_k(w) | profiles>, disconnected."""
    profiles = [Partition(p) for p in profiles]
    if d is None:
        if not profiles:
            raise ValueError("degree is needed when no relative profile is given")
        d = profiles[0].size
    if r != 0:
        raise NotEvaluable("positive-dimension base atoms stay symbolic")
    flat = []
    for item in levels:
        k, mult = item if isinstance(item, tuple) else (item, 1)
        flat += [k] * mult
    t = BracketTerm(0, d, tuple(profiles), tuple(Insertion.pure(k, OMEGA) for k in flat), 0)
    return eval_bracket(t, config)


def evaluate_expr(e: ClassExpr, config: EvalConfig = DEFAULT_CONFIG) -> Fraction:
    """Fold a dimension-zero presentation to a rational number."""
    total = Fraction(0)
    for a, c in e.items():
        total += c * evaluate_atom(a, config)
    return total


def evaluate_atom(a, config: EvalConfig = DEFAULT_CONFIG) -> Fraction:
    if isinstance(a, BaseAtom):
        return eval_bracket(a.term, config)
    if isinstance(a, Glue):
        left = evaluate_expr(a.left, config)
        return left * evaluate_expr(a.right, config) if left else Fraction(0)
    if isinstance(a, BracketTerm):
        return eval_bracket(a, config)
    raise TypeError(f"cannot evaluate {a!r}")


# ---------------------------------------------------------------------------
# Hurwitz oracles


def _cycle_type(perm: tuple) -> Partition:
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if not seen[i]:
            n, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                n += 1
            out.append(n)
    return Partition(out)


@lru_cache(maxsize=None)
def _class_members(mu: Partition) -> tuple:
    d = mu.size
    return tuple(p for p in itertools.permutations(range(d)) if _cycle_type(p) == mu)


def _compose(p, q):
    return tuple(p[q[i]] for i in range(len(q)))


def _hurwitz_enumerate(d: int, profiles) -> Fraction:
    if not profiles:
        return Fraction(1, math.factorial(d))
    if len(profiles) == 1:
        return Fraction(int(profiles[0] == Partition((1,) * d)), math.factorial(d))
    first, middle, last = profiles[0], profiles[1:-1], profiles[-1]
    # product == id is conjugation invariant, so fix the first factor
    rep = _class_members(first)[0]
    count = 0
    for mids in itertools.product(*[_class_members(m) for m in middle]):
        acc = rep
        for m in mids:
            acc = _compose(acc, m)
        inv = [0] * d
        for i, x in enumerate(acc):
            inv[x] = i
        if _cycle_type(tuple(inv)) == last:
            count += 1
    return Fraction(count * class_size(first), math.factorial(d))


def _hurwitz_frobenius(d: int, profiles) -> Fraction:
    tab = characters(d, max(d, DEFAULT_MAX_DEGREE))
    total = Fraction(0)
    sizes = math.prod(class_size(p) for p in profiles)
    for lam, dim in zip(tab.partitions, tab.dims):
        num = math.prod(tab.chi(lam, p) for p in profiles)
        total += Fraction(num * dim * dim, dim ** len(profiles))
    return total * sizes / math.factorial(d) ** 2


def hurwitz_bruteforce(d: int, profiles, method: str = "enumerate", max_degree: int = 6) -> Fraction:
    """(1/d!) #{(s_1..s_m) : s_i of type eta_i, s_1...s_m = 1}."""
    if d > max_degree:
        raise ResourceError(f"brute-force Hurwitz count capped at d={max_degree}")
    profiles = [Partition(p) for p in profiles]
    if any(p.size != d for p in profiles):
        raise ValueError("branch profiles must be partitions of d")
    if method == "enumerate":
        return _hurwitz_enumerate(d, profiles)
    if method == "frobenius":
        return _hurwitz_frobenius(d, profiles)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# refined descendent spanning search


@dataclass(frozen=True)
class TildeTau:
    d: int
    coefficients: dict  # level -> Fraction
    rows: tuple  # selected v values
    gamma: tuple  # gamma[v][j] over enumerate_partitions(d)
    rank: int

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "coefficients": {str(q): str(c) for q, c in self.coefficients.items()},
            "rows": list(self.rows),
            "partitions": [list(p) for p in enumerate_partitions(self.d)],
            "gamma": [[str(x) for x in row] for row in self.gamma],
            "rank": self.rank,
        }


def gamma_matrix(coefficients: dict, d: int, vmax: int,
                 config: EvalConfig = DEFAULT_CONFIG) -> list[list[Fraction]]:
    """gamma[v][eta] = <tilde_tau(w)^v | eta>^{P^1} for v = 0..vmax."""
    cfg = EvalConfig(config.max_degree, config.max_q, {"_g": {d: dict(coefficients)}})
    parts = enumerate_partitions(d)
    out = []
    for v in range(vmax + 1):
        inserts = tuple(Insertion.pure("_g", OMEGA) for _ in range(v))
        out.append([eval_bracket(BracketTerm(0, d, (eta,), inserts, 0), cfg) for eta in parts])
    return out


def _candidates(q: int):
    values = (1, 2, -1, 3, -2)
    for combo in itertools.product(values, repeat=q + 1):
        yield {k: Fraction(c) for k, c in enumerate(combo)}


@lru_cache(maxsize=None)
def find_tilde_tau(d: int, max_q: int = 3, max_degree: int = DEFAULT_MAX_DEGREE) -> TildeTau:
    """First refined point descendent whose gamma functions span Q^{P(d)}."""
    if d > max_degree:
        raise ResourceError(f"degree {d} exceeds the configured cap {max_degree}")
    p = len(enumerate_partitions(d))
    best = 0
    for q in range(max_q + 1):
        for coeffs in _candidates(q):
            gam = gamma_matrix(coeffs, d, p - 1)
            rk = linalg.rank(gam)
            best = max(best, rk)
            if rk == p:
                return TildeTau(d, coeffs, tuple(range(p)), tuple(tuple(r) for r in gam), rk)
    raise SearchFailure(f"no spanning refined descendent for d={d} up to q={max_q}; "
                        f"best rank {best} of {p}")
