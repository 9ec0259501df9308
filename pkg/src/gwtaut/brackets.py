"""Formal push-forward brackets and the linear combinations rewrites produce.

A bracket ``[t_k1(c1) ... | eta_1, ..., eta_m]_{r, h, d}`` records the target
genus ``h``, the degree ``d``, the relative profiles, the ordered descendent
insertions and the dimension ``r`` of the pushed-forward class; the domain
genus is implied by ``r``.

Descendent levels are non-negative integers or the name of a refined
descendent profile (``"~"`` by default), which is kept as a formal level until
a numeric evaluation expands it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .cohomology import ALPHA_KIND, BETA_KIND, CohSymbol, CohVector, check_symbol
from .partitions import Partition

Level = Union[int, str]
TILDE = "~"


class _Half:
    """Marker for a dimension that forces a half-integer domain genus."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "HALF"


HALF = _Half()


def level_key(level: Level) -> tuple:
    if isinstance(level, int):
        return (0, level, "")
    return (1, 0, level)


def render_level(level: Level) -> str:
    if isinstance(level, int):
        return str(level)
    return "~" if level == TILDE else "{" + level + "}"


@dataclass(frozen=True)
class Insertion:
    """One descendent insertion; mixed descendents/classes expand multilinearly."""

    desc: tuple  # ((level, Fraction), ...) sorted by level
    cls: CohVector

    @classmethod
    def pure(cls, level: Level, sym: CohSymbol) -> "Insertion":
        return cls(((level, Fraction(1)),), CohVector.of(sym))

    @classmethod
    def make(cls, desc: Mapping | Level, vec: CohVector | CohSymbol) -> "Insertion":
        if not isinstance(desc, Mapping):
            desc = {desc: 1}
        if isinstance(vec, CohSymbol):
            vec = CohVector.of(vec)
        items = []
        for lv, c in desc.items():
            if isinstance(lv, int) and lv < 0:
                raise ValueError("descendent levels must be >= 0")
            if Fraction(c):
                items.append((lv, Fraction(c)))
        items.sort(key=lambda x: level_key(x[0]))
        return cls(tuple(items), vec)

    @property
    def is_pure(self) -> bool:
        return len(self.desc) == 1 and self.desc[0][1] == 1 and len(self.cls) == 1 and next(
            iter(self.cls.values())) == 1

    @property
    def level(self) -> Level:
        return self.desc[0][0]

    @property
    def symbol(self) -> CohSymbol:
        return next(iter(self.cls))

    def expand(self):
        """Yield (coefficient, pure insertion) pairs."""
        for (lv, c1), (sym, c2) in itertools.product(self.desc, self.cls.items()):
            yield c1 * c2, Insertion.pure(lv, sym)

    def sort_key(self) -> tuple:
        return (level_key(self.level), self.symbol.sort_key())

    def render(self, h: int | None = 1) -> str:
        if self.is_pure:
            return f"t{render_level(self.level)}({self.symbol.render(h)})"
        return f"t<{self.desc}>({self.cls!r})"


def ins(level: Level, sym: CohSymbol) -> Insertion:
    return Insertion.pure(level, sym)


@dataclass(frozen=True)
class BracketTerm:
    h: int
    d: int
    profiles: tuple  # tuple[Partition]
    insertions: tuple  # tuple[Insertion]
    r: int
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "profiles", tuple(Partition(p) for p in self.profiles))
        object.__setattr__(self, "insertions", tuple(self.insertions))
        if self.h < 0 or self.d < 0:
            raise ValueError("target genus and degree must be non-negative")
        for p in self.profiles:
            if p.size != self.d:
                raise ValueError(f"relative profile {p} has size {p.size} != d={self.d}")
        for x in self.insertions:
            for s in x.cls:
                check_symbol(s, self.h)

    @property
    def is_pure(self) -> bool:
        return all(x.is_pure for x in self.insertions)

    @property
    def has_odd(self) -> bool:
        return any(s.is_odd for x in self.insertions for s in x.cls)

    @property
    def is_even(self) -> bool:
        return not self.has_odd

    def with_(self, **kw) -> "BracketTerm":
        base = dict(h=self.h, d=self.d, profiles=self.profiles, insertions=self.insertions,
                    r=self.r, sign=self.sign)
        base.update(kw)
        return BracketTerm(**base)

    def render(self) -> str:
        body = " ".join(x.render(self.h) for x in self.insertions)
        if self.profiles:
            body = (body + " " if body else "") + "| " + ", ".join(str(p) for p in self.profiles)
        s = f"[ {body} ]_{{r={self.r}, h={self.h}, d={self.d}}}" if body else \
            f"[ ]_{{r={self.r}, h={self.h}, d={self.d}}}"
        return ("-" if self.sign < 0 else "") + s

    def sort_key(self) -> tuple:
        return (0, self.h, self.d, self.r, tuple(tuple(p) for p in self.profiles),
                tuple(x.sort_key() for x in self.insertions))

    def to_json(self) -> dict:
        return {
            "kind": "bracket", "h": self.h, "d": self.d, "r": self.r,
            "profiles": [list(p) for p in self.profiles],
            "insertions": [
                {"level": x.level, "class": x.symbol.render(self.h)} if x.is_pure else
                {"desc": {str(k): str(v) for k, v in x.desc},
                 "class": {s.render(self.h): str(c) for s, c in x.cls.items()}}
                for x in self.insertions
            ],
        }

    __str__ = render


def genus_of(t: BracketTerm):
    """Domain genus implied by the dimension of a pure term, or HALF.

    Uses r = 2g - 2 + d(2 - 2h) + sum_i (l(eta_i) - d) + n - sum_j (k_j + codim(c_j)).
    Returns None when some level is a refined (non-integer) profile.
    """
    total2 = 0  # twice sum(k + codim)
    for x in t.insertions:
        if not x.is_pure or not isinstance(x.level, int):
            return None
        total2 += 2 * x.level + x.symbol.codim2
    n = len(t.insertions)
    rel = sum(len(p) - t.d for p in t.profiles)
    # 2(2g - 2) = 2r - 2d(2-2h) - 2 rel - 2n + total2
    twice = 2 * t.r - 2 * t.d * (2 - 2 * t.h) - 2 * rel - 2 * n + total2
    if twice % 4:
        return HALF
    return twice // 4 + 1


def dimension_for(t: BracketTerm, g: int) -> int:
    """Inverse of genus_of: the dimension r a pure term of genus g has."""
    total2 = sum(2 * x.level + x.symbol.codim2 for x in t.insertions)
    rel = sum(len(p) - t.d for p in t.profiles)
    twice = 4 * (g - 1) + 2 * t.d * (2 - 2 * t.h) + 2 * rel + 2 * len(t.insertions) - total2
    if twice % 2:
        raise ValueError("term has no integral dimension for this genus")
    return twice // 2


def odd_type(t: BracketTerm, handle: int = 1) -> tuple[int, int]:
    a = b = 0
    for x in t.insertions:
        s = x.symbol
        if s.is_odd and s.handle == handle:
            if s.kind == ALPHA_KIND:
                a += 1
            else:
                b += 1
    return a, b


def is_balanced(t: BracketTerm) -> bool:
    a, b = odd_type(t)
    return a == b


# ---------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class BaseAtom:
    """An even relative P^1 bracket, treated as an opaque tautological leaf."""

    term: BracketTerm

    def __post_init__(self):
        if self.term.h != 0 or not self.term.is_even:
            raise ValueError("base atoms are even brackets on a genus-0 target")

    def render(self) -> str:
        return "P" + self.term.render()

    def sort_key(self):
        return (1,) + self.term.sort_key()[1:]

    def to_json(self):
        return {"kind": "base", "term": self.term.to_json()}


@dataclass(frozen=True)
class Glue:
    """Gluing push-forward of two factors along ``ell`` pairs of markings."""

    left: "ClassExpr"
    right: "ClassExpr"
    ell: int

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError("a gluing node glues at least one pair")

    def render(self) -> str:
        return f"glue{self.ell}({self.left.render()} ; {self.right.render()})"

    def sort_key(self):
        return (2, self.ell, self.left.sort_key(), self.right.sort_key())

    def to_json(self):
        return {"kind": "glue", "ell": self.ell, "left": self.left.to_json(),
                "right": self.right.to_json()}


Atom = Union[BracketTerm, BaseAtom, Glue]


def fmt_q(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class ClassExpr(Mapping):
    """Immutable exact-rational linear combination of atoms."""

    __slots__ = ("_d", "_hash")

    def __init__(self, data: Mapping | Iterable = ()):
        if isinstance(data, ClassExpr):
            self._d = data._d
        else:
            acc: dict = {}
            items = data.items() if isinstance(data, Mapping) else data
            for a, c in items:
                if c:
                    acc[a] = acc.get(a, 0) + Fraction(c)
            self._d = {k: v for k, v in acc.items() if v}
        self._hash = None

    @classmethod
    def atom(cls, a: Atom, c=1) -> "ClassExpr":
        return cls({a: c})

    def __getitem__(self, k):
        return self._d[k]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, ClassExpr):
            return self._d == other._d
        return NotImplemented

    def __add__(self, other: "ClassExpr") -> "ClassExpr":
        return ClassExpr(itertools.chain(self._d.items(), other._d.items()))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "ClassExpr":
        c = Fraction(c)
        if not c:
            return ZERO
        return ClassExpr({k: v * c for k, v in self._d.items()})

    def sorted_items(self):
        return sorted(self._d.items(), key=lambda kv: kv[0].sort_key())

    def sort_key(self):
        return tuple((a.sort_key(), c) for a, c in self.sorted_items())

    def atoms_of_kind(self, kind) -> list:
        return [a for a in self._d if isinstance(a, kind)]

    def render(self) -> str:
        if not self._d:
            return "0"
        out = []
        for a, c in self.sorted_items():
            mag = fmt_q(abs(c))
            sgn = "-" if c < 0 else "+"
            head = a.render() if mag == "1" else f"{mag}*{a.render()}"
            out.append((sgn, head))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sgn, head in out[1:]:
            s += f" {sgn} {head}"
        return s

    def to_json(self) -> list:
        return [{"coeff": fmt_q(c), "atom": a.to_json()} for a, c in self.sorted_items()]

    def __repr__(self):
        return f"ClassExpr({self.render()})"


ZERO = ClassExpr()


class Acc:
    """Mutable accumulator for assembling large sums before freezing."""

    def __init__(self):
        self.d: dict = {}

    def add(self, e: ClassExpr | Atom, c=1):
        c = Fraction(c)
        if not c:
            return
        if isinstance(e, ClassExpr):
            for a, v in e.items():
                self.d[a] = self.d.get(a, 0) + v * c
        else:
            self.d[e] = self.d.get(e, 0) + c

    def freeze(self) -> ClassExpr:
        return ClassExpr(self.d)


def glue(left: ClassExpr, right: ClassExpr, ell: int) -> ClassExpr:
    """Bilinear gluing, expanded to Glue atoms over single-atom children."""
    acc = Acc()
    for la, lc in left.items():
        for ra, rc in right.items():
            acc.add(Glue(ClassExpr.atom(la), ClassExpr.atom(ra), ell), lc * rc)
    return acc.freeze()


# ---------------------------------------------------------------------------
# canonical forms


def koszul_sort(items: list, key, is_odd) -> tuple[int, list]:
    """Stable sort returning (sign, sorted list); sign counts odd inversions."""
    idx = sorted(range(len(items)), key=lambda i: key(items[i]))
    odd_pos = [i for i in idx if is_odd(items[i])]
    inv = sum(1 for x, y in itertools.combinations(odd_pos, 2) if x > y)
    return (-1 if inv % 2 else 1), [items[i] for i in idx]


def shuffle_sign(order: list[int], odd: list[bool]) -> int:
    """Koszul sign of listing elements in ``order`` (indices into the original)."""
    seq = [i for i in order if odd[i]]
    inv = sum(1 for x, y in itertools.combinations(seq, 2) if x > y)
    return -1 if inv % 2 else 1


def _canonical_pure(h, d, profiles, inserts, r):
    sgn, ordered = koszul_sort(list(inserts), Insertion.sort_key, lambda x: x.symbol.is_odd)
    for x, y in zip(ordered, ordered[1:]):
        if x.symbol.is_odd and x == y:
            return 0, None
    return sgn, BracketTerm(h, d, profiles, tuple(ordered), r)


def canonicalize(t: BracketTerm) -> ClassExpr:
    """Expand multilinearly, Koszul-sort insertions, drop zero classes."""
    if t.r < 0:
        return ZERO
    acc = Acc()
    for choice in itertools.product(*[list(x.expand()) for x in t.insertions]):
        coeff = Fraction(t.sign)
        for c, _ in choice:
            coeff *= c
        if not coeff:
            continue
        sgn, term = _canonical_pure(t.h, t.d, t.profiles, [x for _, x in choice], t.r)
        if term is None or genus_of(term) is HALF:
            continue
        acc.add(term, coeff * sgn)
    return acc.freeze()


def canonical_atom(t: BracketTerm) -> tuple[int, BracketTerm | None]:
    """For a pure term: (sign, canonical term) with t == sign * term, or (0, None)."""
    if not t.is_pure:
        raise ValueError("canonical_atom needs a pure term")
    if t.r < 0:
        return 0, None
    sgn, term = _canonical_pure(t.h, t.d, t.profiles, list(t.insertions), t.r)
    if term is None or genus_of(term) is HALF:
        return 0, None
    return sgn * t.sign, term


def canonicalize_expr(e: ClassExpr) -> ClassExpr:
    acc = Acc()
    for a, c in e.items():
        if isinstance(a, BracketTerm):
            acc.add(canonicalize(a), c)
        else:
            acc.add(a, c)
    return acc.freeze()


def map_classes(t: BracketTerm, f) -> BracketTerm:
    """Apply a linear map on CohVectors to every insertion class."""
    return t.with_(insertions=tuple(Insertion(x.desc, f(x.cls)) for x in t.insertions))


def bracket(h: int, d: int, inserts: Iterable, profiles: Iterable = (), r: int = 0) -> BracketTerm:
    """Convenience constructor: ``inserts`` are (level, CohSymbol) pairs or Insertions."""
    items = []
    for x in inserts:
        items.append(x if isinstance(x, Insertion) else Insertion.pure(x[0], x[1]))
    return BracketTerm(h, d, tuple(profiles), tuple(items), r)
