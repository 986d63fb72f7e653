"""Closed-form lower bounds on PC encodings of AMO/EO and comparison tables.

All ceilings of square-root expressions are computed in integer arithmetic
so a table is never off by one because of floating-point rounding.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

from .encodings import product_size


class InvalidN(ValueError):
    pass


def _ceil_sqrt(k: int) -> int:
    r = math.isqrt(k)
    return r if r * r == k else r + 1


def _check(n: int, least: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise InvalidN(f"n must be an integer, got {n!r}")
    if n < least:
        raise InvalidN(f"n must be at least {least}, got {n}")


def lower_bound_general(n: int) -> int:
    """Minimum size of any PC encoding of AMO_n or EO_n, as far as it is known."""
    _check(n, 2)
    if n == 2:
        return 1
    if n <= 8:
        return 3 * n - 6
    # ceil(2n + sqrt(n) - 2)
    return 2 * n - 2 + _ceil_sqrt(n)


def lower_bound_2cnf(n: int) -> int:
    """The same bound restricted to 2-CNF encodings."""
    _check(n, 2)
    if n == 2:
        return 1
    if n <= 10:
        return 3 * n - 6
    # ceil(2n + 2 sqrt(n) - 3) with 2 sqrt(n) = sqrt(4n)
    return 2 * n - 3 + _ceil_sqrt(4 * n)


def lower_bound_2cnf_sqrt_branch(n: int) -> int:
    """``ceil(2n + 2 sqrt(n) - 3)`` without the small-n case split."""
    _check(n, 1)
    return 2 * n - 3 + _ceil_sqrt(4 * n)


@dataclass(frozen=True)
class RegularFloor:
    """``2n + sqrt(n - 3/4) - 3/2`` for regular-form p-encodings.

    ``exact`` is set when the radicand is a perfect square.
    """

    n: int
    value: float
    ceiling: int
    exact: Optional[Fraction] = None


def regular_form_floor(n: int) -> RegularFloor:
    _check(n, 7)
    # 2n + sqrt(n - 3/4) - 3/2 == (K + sqrt(K)) / 2 with K = 4n - 3
    k = 4 * n - 3
    r = math.isqrt(k)
    exact = Fraction(k + r, 2) if r * r == k else None
    # smallest m with 2m - K >= sqrt(K)
    m = (k + r) // 2
    while 2 * m - k < 0 or (2 * m - k) ** 2 < k:
        m += 1
    while m - 1 >= 0 and 2 * (m - 1) - k >= 0 and (2 * (m - 1) - k) ** 2 >= k:
        m -= 1
    value = float(exact) if exact is not None else (k + math.sqrt(k)) / 2
    return RegularFloor(n, value, m, exact)


@dataclass(frozen=True)
class BoundsRow:
    n: int
    lb_general: int
    lb_2cnf: int
    lb_regular_term: Optional[float]
    regular_floor_ceil: Optional[int]
    size_pairwise: int
    size_sequential: int
    size_product: int

    def as_dict(self) -> dict:
        return asdict(self)


CSV_COLUMNS = ("n", "lb_general", "lb_2cnf", "regular_floor_ceil",
               "size_pairwise", "size_sequential", "size_product")


def bounds_row(n: int) -> BoundsRow:
    _check(n, 3)
    reg = regular_form_floor(n) if n >= 7 else None
    return BoundsRow(
        n=n,
        lb_general=lower_bound_general(n),
        lb_2cnf=lower_bound_2cnf(n),
        lb_regular_term=reg.value if reg else None,
        regular_floor_ceil=reg.ceiling if reg else None,
        size_pairwise=n * (n - 1) // 2,
        size_sequential=3 * n - 6,
        size_product=product_size(n),
    )


def bounds_table(n_from: int, n_to: int) -> list[BoundsRow]:
    _check(n_from, 3)
    _check(n_to, 3)
    if n_to < n_from:
        raise InvalidN("empty range")
    return [bounds_row(n) for n in range(n_from, n_to + 1)]
