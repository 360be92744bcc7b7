"""Interval conditions on extension sets under a pair of letter orders.

A word drawn on k letters can only be the coding of a length-k interval
exchange if, once the letters are ordered as the intervals sit in the
domain (pi0) and as they sit in the image (pi1), every factor's left
extensions form a pi1-interval, its right extensions form a
pi0-interval, and adjacent left extensions hand over exactly one shared
right extension.  check_orders tests a single order pair against every
factor up to a length bound; search_orders brute-forces the pair.

A pass is evidence, not proof: only factors of the indexed prefix are
inspected, so the verdict reads "consistent up to N".
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .words import FactorSet

__all__ = ["OrderPair", "OrderReport", "check_orders", "extension_sets",
           "search_orders"]


@dataclass(frozen=True)
class OrderPair:
    pi0: tuple  # letters in domain order
    pi1: tuple  # letters in image order

    def __post_init__(self):
        for name, pi in (("pi0", self.pi0), ("pi1", self.pi1)):
            if len(set(pi)) != len(pi):
                raise ValueError(f"{name} repeats a letter")
        if set(self.pi0) != set(self.pi1):
            raise ValueError("orders are over different letter sets")

    @property
    def k(self) -> int:
        return len(self.pi0)

    def rank0(self, x) -> int:
        return self.pi0.index(x)

    def rank1(self, x) -> int:
        return self.pi1.index(x)


def extension_sets(fs: FactorSet, w: str):
    """Left and right one-letter extension sets of a factor."""
    if len(w) + 1 > fs.max_len:
        raise ValueError(f"extensions of {w!r} lie outside the indexed window")
    if w and w not in fs.counts(len(w)):
        raise ValueError(f"{w!r} is not a factor")
    ext = fs.counts(len(w) + 1)
    left = frozenset(x for x in fs.alphabet if x + w in ext)
    right = frozenset(y for y in fs.alphabet if w + y in ext)
    return left, right


@dataclass(frozen=True)
class OrderReport:
    passed: bool
    condition: str | None  # "1" | "2" | "3" | "letters" | "separation"
    witness: tuple | None
    max_len: int

    def __str__(self) -> str:
        if self.passed:
            return f"consistent up to length {self.max_len}"
        return f"fails condition {self.condition}: {self.witness}"


def _is_interval(letters, rank) -> bool:
    if not letters:
        return True
    ranks = sorted(rank(x) for x in letters)
    return ranks[-1] - ranks[0] + 1 == len(ranks)


def check_orders(fs: FactorSet, orders: OrderPair, max_len: int) -> OrderReport:
    """First violated condition wins; factors scanned short-to-long."""
    if max_len + 2 > fs.max_len:
        raise ValueError(
            f"checking to length {max_len} inspects factors of length "
            f"{max_len + 2}, index stops at {fs.max_len}")
    if set(orders.pi0) != set(fs.alphabet):
        return OrderReport(False, "letters",
                           (tuple(fs.alphabet), orders.pi0), max_len)
    for j in range(1, orders.k):
        if set(orders.pi0[:j]) == set(orders.pi1[:j]):
            return OrderReport(False, "separation", (j,), max_len)
    for n in range(max_len + 1):
        for w in ([""] if n == 0 else sorted(fs.counts(n))):
            left, right = extension_sets(fs, w)
            if not _is_interval(left, orders.rank1):
                return OrderReport(False, "1", (w, "left", tuple(sorted(left))),
                                   max_len)
            if not _is_interval(right, orders.rank0):
                return OrderReport(False, "1", (w, "right", tuple(sorted(right))),
                                   max_len)
            block = [x for x in orders.pi1 if x in left]
            rights = {x: extension_sets(fs, x + w)[1] for x in block}
            for x, y in zip(block, block[1:]):
                common = rights[x] & rights[y]
                if len(common) != 1:
                    return OrderReport(False, "3",
                                       (w, x, y, tuple(sorted(common))),
                                       max_len)
            for i, x in enumerate(block):
                for y in block[i + 1:]:
                    # truncation can empty a right-extension set, so the
                    # pairwise check is not collapsed to adjacent pairs
                    for z in rights[x]:
                        for t in rights[y]:
                            if orders.rank0(z) > orders.rank0(t):
                                return OrderReport(False, "2", (w, x, y, z, t),
                                                   max_len)
    return OrderReport(True, None, None, max_len)


def search_orders(fs: FactorSet, max_len: int):
    """Every order pair passing check_orders, in lexicographic order."""
    letters = tuple(fs.alphabet)
    if len(letters) > 6:
        raise ValueError(f"alphabet of size {len(letters)} is too large to search")
    out = []
    for p0 in permutations(letters):
        for p1 in permutations(letters):
            pair = OrderPair(p0, p1)
            if check_orders(fs, pair, max_len).passed:
                out.append(pair)
    return out
