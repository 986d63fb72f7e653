"""Generators for at-most-one / exactly-one encodings and test fixtures.

Inputs are numbered 1..n; auxiliaries n+1.. in the order the construction
introduces them (outermost first).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional

from .cnf import Encoding, make_clause

KINDS = (
    "pairwise-amo",
    "prime-exone",
    "sequential-amo",
    "tree-amo",
    "product-amo",
    "exone-wrap",
    "amo-wrap",
    "nonpc-exone",
    "partition-fixture",
)
AMO_FAMILY = ("pairwise-amo", "sequential-amo", "tree-amo", "product-amo")
TWO_CNF = ("pairwise-amo", "sequential-amo", "tree-amo", "product-amo")


class InvalidParameters(ValueError):
    pass


@dataclass(frozen=True)
class EncodingKind:
    tag: str
    n: int
    blocks: Optional[tuple[int, int, int, int]] = None
    inner: str = "sequential-amo"  # wrapped encoding for exone-wrap / amo-wrap

    def __post_init__(self):
        if self.tag not in KINDS:
            raise InvalidParameters(f"unknown encoding kind {self.tag!r}")
        if self.n < 1:
            raise InvalidParameters("n must be at least 1")
        if self.tag in ("sequential-amo", "tree-amo", "product-amo", "nonpc-exone") and self.n < 3:
            raise InvalidParameters(f"{self.tag} needs n >= 3")
        if self.tag in ("exone-wrap", "amo-wrap"):
            if self.inner not in AMO_FAMILY:
                raise InvalidParameters(f"cannot wrap {self.inner!r}")
            EncodingKind(self.inner, self.n)
        if self.tag == "partition-fixture":
            if self.blocks is None or len(self.blocks) != 4:
                raise InvalidParameters("partition-fixture needs four block sizes")
            if any(b < 1 for b in self.blocks):
                raise InvalidParameters("partition blocks must be non-empty")
            if sum(self.blocks) != self.n:
                raise InvalidParameters("block sizes must add up to n")
        elif self.blocks is not None:
            raise InvalidParameters("blocks only apply to partition-fixture")


class _Builder:
    def __init__(self, n: int):
        self.n = n
        self.next_var = n + 1
        self.clauses: list[frozenset] = []

    def fresh(self) -> int:
        v = self.next_var
        self.next_var += 1
        return v

    def add(self, *lits: int) -> None:
        self.clauses.append(make_clause(lits))

    def pairwise(self, xs) -> None:
        # distinct variables, so no validation needed
        self.clauses.extend(frozenset((-a, -b)) for a, b in combinations(xs, 2))

    def encoding(self) -> Encoding:
        return Encoding(frozenset(self.clauses), range(1, self.n + 1),
                        range(self.n + 1, self.next_var))


# -- sizes -----------------------------------------------------------------

def product_dims(n: int) -> tuple[int, int]:
    m1 = math.isqrt(n - 1) + 1 if n > 1 else 1  # ceil(sqrt(n))
    m2 = -(-n // m1)
    return m1, m2


@lru_cache(maxsize=None)
def product_size(n: int) -> int:
    if n < 3:
        raise InvalidParameters("product encoding needs n >= 3")
    return _product_choice(n)[1]


@lru_cache(maxsize=None)
def _product_choice(n: int) -> tuple[str, int]:
    if n == 3:
        return ("base", 3)
    reduce_size = 3 + _product_choice(n - 1)[1]
    if n <= 6:
        return ("reduce", reduce_size)
    m1, m2 = product_dims(n)
    array_size = 2 * n + _product_choice(m1)[1] + _product_choice(m2)[1]
    # ties go to the array candidate (it is in regular form)
    if array_size <= reduce_size:
        return ("array", array_size)
    return ("reduce", reduce_size)


def product_plan(n: int) -> str:
    """Which candidate the product recursion takes at the top level."""
    if n < 3:
        raise InvalidParameters("product encoding needs n >= 3")
    return _product_choice(n)[0]


def expected_size(kind: EncodingKind) -> int:
    n = kind.n
    tag = kind.tag
    if tag == "pairwise-amo":
        return n * (n - 1) // 2
    if tag == "prime-exone":
        return n * (n - 1) // 2 + 1
    if tag in ("sequential-amo", "tree-amo"):
        return 3 * n - 6
    if tag == "product-amo":
        return product_size(n)
    if tag in ("exone-wrap", "amo-wrap"):
        return expected_size(EncodingKind(kind.inner, n)) + 1
    if tag == "nonpc-exone":
        return n * (n - 1) // 2 + 2
    if tag == "partition-fixture":
        a, b, c, d = kind.blocks
        edges = n * (n - 1) // 2 - a * b - c * d
        return edges + 1 + (1 + b) + (1 + a) + (1 + d) + (1 + c) + n
    raise InvalidParameters(tag)


# -- constructions ---------------------------------------------------------

def _sequential(bld: _Builder, xs: list[int]) -> None:
    xs = list(xs)
    while len(xs) > 3:
        y = bld.fresh()
        a, b = xs[0], xs[1]
        bld.add(-a, -b)
        bld.add(-a, y)
        bld.add(-b, y)
        xs = [y] + xs[2:]
    bld.pairwise(xs)


def _tree(bld: _Builder, xs: list[int]) -> None:
    xs = list(xs)
    while len(xs) > 3:
        y = bld.fresh()
        a, b = xs[0], xs[1]
        bld.add(-a, -b)
        bld.add(-a, y)
        bld.add(-b, y)
        xs = xs[2:] + [y]
    bld.pairwise(xs)


def _product(bld: _Builder, xs: list[int]) -> None:
    n = len(xs)
    plan = _product_choice(n)[0]
    if plan == "base":
        bld.pairwise(xs)
    elif plan == "reduce":
        y = bld.fresh()
        a, b = xs[0], xs[1]
        bld.add(-a, -b)
        bld.add(-a, y)
        bld.add(-b, y)
        _product(bld, [y] + list(xs[2:]))
    else:
        m1, m2 = product_dims(n)
        rows = [bld.fresh() for _ in range(m1)]
        cols = [bld.fresh() for _ in range(m2)]
        for i, x in enumerate(xs):
            bld.add(-x, rows[i // m2])
            bld.add(-x, cols[i % m2])
        _product(bld, rows)
        _product(bld, cols)


_AMO = {"sequential-amo": _sequential, "tree-amo": _tree, "product-amo": _product,
        "pairwise-amo": lambda bld, xs: bld.pairwise(xs)}


def generate(kind: EncodingKind) -> Encoding:
    n = kind.n
    tag = kind.tag
    bld = _Builder(n)
    xs = list(range(1, n + 1))
    if tag in _AMO:
        _AMO[tag](bld, xs)
    elif tag == "prime-exone":
        bld.pairwise(xs)
        bld.add(*xs)
    elif tag == "exone-wrap":
        bld.add(*xs)
        _AMO[kind.inner](bld, xs)
    elif tag == "amo-wrap":
        z = bld.fresh()
        bld.add(-1, z)
        _AMO[kind.inner](bld, [z] + xs[1:])
    elif tag == "nonpc-exone":
        y = bld.fresh()
        bld.add(*(xs[: n - 2] + [n, y]))
        bld.add(n - 1, n, -y)
        bld.pairwise(xs)
    elif tag == "partition-fixture":
        _partition_fixture(bld, kind.blocks)
    else:
        raise InvalidParameters(tag)
    return bld.encoding()


def partition_blocks(blocks) -> tuple[list[int], ...]:
    out, start = [], 1
    for size in blocks:
        out.append(list(range(start, start + size)))
        start += size
    return tuple(out)


def _partition_fixture(bld: _Builder, blocks) -> None:
    A, B, C, D = partition_blocks(blocks)
    skip = {frozenset((i, j)) for i in A for j in B} | {frozenset((i, j)) for i in C for j in D}
    for i, j in combinations(range(1, bld.n + 1), 2):
        if frozenset((i, j)) not in skip:
            bld.add(-i, -j)
    y = [bld.fresh() for _ in range(5)]
    bld.add(*y)
    for yk, pos_block, neg_block in ((y[0], A, B), (y[1], B, A), (y[2], C, D), (y[3], D, C)):
        bld.add(-yk, *pos_block)
        for i in neg_block:
            bld.add(-yk, -i)
    for i in range(1, bld.n + 1):
        bld.add(-y[4], -i)


# convenience constructors

def pairwise_amo(n: int) -> Encoding:
    return generate(EncodingKind("pairwise-amo", n))


def prime_exone(n: int) -> Encoding:
    return generate(EncodingKind("prime-exone", n))


def sequential_amo(n: int) -> Encoding:
    return generate(EncodingKind("sequential-amo", n))


def tree_amo(n: int) -> Encoding:
    return generate(EncodingKind("tree-amo", n))


def product_amo(n: int) -> Encoding:
    return generate(EncodingKind("product-amo", n))


def exone_wrap(n: int, inner: str = "sequential-amo") -> Encoding:
    return generate(EncodingKind("exone-wrap", n, inner=inner))


def amo_wrap(n: int, inner: str = "sequential-amo") -> Encoding:
    return generate(EncodingKind("amo-wrap", n, inner=inner))


def nonpc_exone(n: int) -> Encoding:
    return generate(EncodingKind("nonpc-exone", n))


def partition_fixture(blocks) -> Encoding:
    blocks = tuple(blocks)
    return generate(EncodingKind("partition-fixture", sum(blocks), blocks))
