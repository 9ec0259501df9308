"""Cohomology of a genus-h target curve.

Basis symbols are ``1``, ``w`` (the point class) and ``a_i``, ``b_i`` for
each handle ``i``.  Codimension is kept as a doubled integer because the odd
classes sit in half-integer complex codimension.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

ONE_KIND, OMEGA_KIND, ALPHA_KIND, BETA_KIND = "1", "w", "a", "b"


@dataclass(frozen=True, order=True)
class CohSymbol:
    kind: str
    handle: int = 0

    def __post_init__(self):
        if self.kind in (ONE_KIND, OMEGA_KIND):
            if self.handle != 0:
                raise ValueError("even symbols carry no handle index")
        elif self.kind in (ALPHA_KIND, BETA_KIND):
            if self.handle < 1:
                raise ValueError("odd symbols need a handle index >= 1")
        else:
            raise ValueError(f"unknown cohomology symbol kind {self.kind!r}")

    @property
    def is_odd(self) -> bool:
        return self.kind in (ALPHA_KIND, BETA_KIND)

    @property
    def codim2(self) -> int:
        """Twice the complex codimension."""
        return {ONE_KIND: 0, OMEGA_KIND: 2}.get(self.kind, 1)

    def sort_key(self) -> tuple:
        return ({ONE_KIND: 0, OMEGA_KIND: 1}.get(self.kind, 2), self.handle, self.kind)

    def render(self, h: int | None = None) -> str:
        if not self.is_odd:
            return self.kind
        if h == 1 and self.handle == 1:
            return self.kind
        return f"{self.kind}{self.handle}"

    def __str__(self):
        return self.render(1)


ONE = CohSymbol(ONE_KIND)
OMEGA = CohSymbol(OMEGA_KIND)


def alpha(i: int = 1) -> CohSymbol:
    return CohSymbol(ALPHA_KIND, i)


def beta(i: int = 1) -> CohSymbol:
    return CohSymbol(BETA_KIND, i)


def basis(h: int) -> list[CohSymbol]:
    out = [ONE]
    for i in range(1, h + 1):
        out += [alpha(i), beta(i)]
    return out + [OMEGA]


def check_symbol(sym: CohSymbol, h: int) -> None:
    if sym.is_odd and sym.handle > h:
        raise ValueError(f"symbol {sym.render()} needs target genus >= {sym.handle}, got h={h}")


class CohVector(Mapping):
    """Sparse exact-rational combination of basis symbols."""

    __slots__ = ("_d", "_hash")

    def __init__(self, data: Mapping | Iterable = ()):
        acc: dict = {}
        items = data.items() if isinstance(data, Mapping) else data
        for sym, c in items:
            c = Fraction(c)
            if c:
                acc[sym] = acc.get(sym, 0) + c
        self._d = {k: v for k, v in acc.items() if v}
        self._hash = None

    @classmethod
    def of(cls, sym: CohSymbol, coeff=1) -> "CohVector":
        return cls({sym: coeff})

    def __getitem__(self, k):
        return self._d[k]

    def __iter__(self):
        return iter(sorted(self._d, key=CohSymbol.sort_key))

    def __len__(self):
        return len(self._d)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, CohVector):
            return self._d == other._d
        return NotImplemented

    def __add__(self, other: "CohVector") -> "CohVector":
        return CohVector(itertools.chain(self._d.items(), other._d.items()))

    def __neg__(self):
        return CohVector({k: -v for k, v in self._d.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "CohVector":
        return CohVector({k: v * c for k, v in self._d.items()})

    def __repr__(self):
        if not self._d:
            return "0"
        return " + ".join(f"{self._d[s]}*{s.render()}" for s in self)


def _symbol_cup(a: CohSymbol, b: CohSymbol) -> CohVector:
    if a == ONE:
        return CohVector.of(b)
    if b == ONE:
        return CohVector.of(a)
    if a.is_odd and b.is_odd and a.handle == b.handle and a.kind != b.kind:
        return CohVector.of(OMEGA, 1 if a.kind == ALPHA_KIND else -1)
    return CohVector()


def cup(a, b, h: int | None = None) -> CohVector:
    """Cup product of two symbols or two CohVectors (bilinear)."""
    if isinstance(a, CohSymbol):
        a = CohVector.of(a)
    if isinstance(b, CohSymbol):
        b = CohVector.of(b)
    if h is not None:
        for s in itertools.chain(a, b):
            check_symbol(s, h)
    out = CohVector()
    for sa, ca in a.items():
        for sb, cb in b.items():
            out = out + _symbol_cup(sa, sb).scale(ca * cb)
    return out


def integrate(v: CohVector) -> Fraction:
    """Pairing with the fundamental class: the coefficient of ``w``."""
    return v.get(OMEGA, Fraction(0))


PHI = ((1, 0), (1, 1))


def _det(m) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def apply_sl2(m, i: int, v: CohVector) -> CohVector:
    """Act by ``m`` on the column (a_i, b_i), fixing all other symbols."""
    if _det(m) != 1:
        raise ValueError(f"matrix {m} is not in SL2(Z)")
    out = []
    for sym, c in v.items():
        if sym.is_odd and sym.handle == i:
            row = m[0] if sym.kind == ALPHA_KIND else m[1]
            out += [(alpha(i), c * row[0]), (beta(i), c * row[1])]
        else:
            out.append((sym, c))
    return CohVector(out)


def monodromy_phi(v: CohVector) -> CohVector:
    """The genus-one monodromy a -> a, b -> a + b."""
    return apply_sl2(PHI, 1, v)


def matmul(m2, m1):
    return tuple(
        tuple(sum(m2[r][k] * m1[k][c] for k in range(2)) for c in range(2)) for r in range(2)
    )


class TensorExpr(Mapping):
    """Sparse combination of equal-length words of CohSymbols."""

    __slots__ = ("_d", "arity")

    def __init__(self, data: Mapping | Iterable = (), arity: int | None = None):
        acc: dict = {}
        items = data.items() if isinstance(data, Mapping) else data
        for word, c in items:
            word = tuple(word)
            if arity is None:
                arity = len(word)
            elif len(word) != arity:
                raise ValueError("tensor words must all have the same length")
            acc[word] = acc.get(word, 0) + Fraction(c)
        self._d = {k: v for k, v in acc.items() if v}
        self.arity = arity

    def __getitem__(self, k):
        return self._d[k]

    def __iter__(self):
        return iter(sorted(self._d, key=lambda w: [s.sort_key() for s in w]))

    def __len__(self):
        return len(self._d)

    def __eq__(self, other):
        if isinstance(other, TensorExpr):
            return self._d == other._d
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._d.items()))

    def __add__(self, other):
        return TensorExpr(itertools.chain(self._d.items(), other._d.items()), self.arity)

    def map_symbols(self, f) -> "TensorExpr":
        """Apply a linear map CohSymbol -> CohVector to every slot."""
        out = []
        for word, c in self._d.items():
            images = [list(f(s).items()) for s in word]
            for choice in itertools.product(*images):
                coeff = c
                for _, cc in choice:
                    coeff *= cc
                out.append((tuple(s for s, _ in choice), coeff))
        return TensorExpr(out, self.arity)

    def swap_slots(self, i: int, j: int) -> "TensorExpr":
        """Transpose slots i and j with the Koszul sign of the odd symbols moved."""
        out = []
        for word, c in self._d.items():
            w = list(word)
            # moving w[i] past w[i+1..j] and w[j] back past w[i+1..j-1]
            mid = sum(1 for s in w[i + 1:j] if s.is_odd)
            n = (w[i].is_odd * (mid + w[j].is_odd)) + (w[j].is_odd * mid)
            w[i], w[j] = w[j], w[i]
            out.append((tuple(w), -c if n % 2 else c))
        return TensorExpr(out, self.arity)

    def __repr__(self):
        parts = []
        for w in self:
            c = self._d[w]
            parts.append(f"{c}*" + "⊗".join(s.render(1) for s in w))
        return " + ".join(parts) if parts else "0"


def diagonal_even(r: int) -> TensorExpr:
    if r < 2:
        raise ValueError("small diagonal needs r >= 2")
    words = []
    for k in range(r):
        words.append((tuple(ONE if i == k else OMEGA for i in range(r)), 1))
    return TensorExpr(words, r)


def diagonal_odd(r: int) -> TensorExpr:
    if r < 2:
        raise ValueError("small diagonal needs r >= 2")
    a, b = alpha(1), beta(1)
    words = []
    for i, j in itertools.combinations(range(r), 2):
        base = [OMEGA] * r
        w1, w2 = list(base), list(base)
        w1[i], w1[j] = a, b
        w2[i], w2[j] = b, a
        words += [(tuple(w1), -1), (tuple(w2), 1)]
    return TensorExpr(words, r)


def diagonal(r: int) -> TensorExpr:
    """Kunneth decomposition of the small diagonal of E^r for an elliptic curve E."""
    return diagonal_even(r) + diagonal_odd(r)
