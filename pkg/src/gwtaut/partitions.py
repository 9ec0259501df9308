"""Integer partitions of the degree and the combinatorial weights of gluing sums."""

from __future__ import annotations

import math
import re
from collections import Counter
from functools import lru_cache


class Partition(tuple):
    """A weakly decreasing tuple of positive integers.

    Construction sorts the parts, so ``Partition((1, 2))`` and
    ``Partition((2, 1))`` are the same value.
    """

    def __new__(cls, parts=()):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def multiplicities(self) -> Counter:
        return Counter(self)

    def __repr__(self):
        return f"Partition({tuple(self)!r})"

    def __str__(self):
        return "(" + ",".join(str(p) for p in self) + ")"

    @classmethod
    def parse(cls, text: str) -> "Partition":
        m = re.fullmatch(r"\s*\(\s*(\d+(?:\s*,\s*\d+)*)?\s*\)\s*", text)
        if m is None:
            raise ValueError(f"not a partition: {text!r}")
        body = m.group(1)
        return cls(int(x) for x in body.split(",")) if body else cls(())


@lru_cache(maxsize=None)
def _enumerate(d: int, largest: int) -> tuple:
    if d == 0:
        return ((),)
    out = []
    for first in range(min(d, largest), 0, -1):
        for rest in _enumerate(d - first, first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(d: int) -> list[Partition]:
    """All partitions of ``d`` in reverse-lexicographic order.

    This order fixes row and column order of every partition-indexed matrix
    downstream (character tables, gamma matrices).
    """
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"degree must be a positive integer, got {d!r}")
    return [Partition(p) for p in _enumerate(d, d)]


def aut_count(mu: Partition) -> int:
    """Order of the automorphism group of ``mu``: product of multiplicity factorials."""
    return math.prod(math.factorial(m) for m in Counter(mu).values())


def zfactor(mu: Partition) -> int:
    """The gluing weight |Aut(mu)| * prod(mu_i), i.e. the centralizer order in S_|mu|."""
    return aut_count(mu) * math.prod(mu)


def class_size(mu: Partition) -> int:
    """Number of permutations of cycle type ``mu``."""
    return math.factorial(sum(mu)) // zfactor(mu)


def sign(mu: Partition) -> int:
    """Sign of a permutation of cycle type ``mu``."""
    return -1 if (sum(mu) - len(mu)) % 2 else 1
