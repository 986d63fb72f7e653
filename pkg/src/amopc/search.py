"""Exhaustive search for minimum auxiliary-free encodings on tiny inputs.

Any auxiliary variable of a minimum encoding occurs in at least five
clauses (otherwise DP-elimination removes it without growth), so a minimum
of size at most 4 found without auxiliaries is a true minimum.  Budgets
above 4 need an explicit ``unsafe_no_aux`` acknowledgement and never count
as a minimality certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Optional

from .cnf import Encoding, clause_key, make_clause, sorted_formula
from .propagation import closure_set
from .verify import FunctionSpec, assumption_sets

MAX_N = 4
MAX_SIZE = 8
SAFE_SIZE = 4
REQUIREMENTS = ("enc", "p", "input-pc")


class SearchError(ValueError):
    pass


class _Inconsistent:
    def __repr__(self) -> str:
        return "INCONSISTENT"

    def __bool__(self) -> bool:
        return False


INCONSISTENT = _Inconsistent()


def semantic_consequences(f: FunctionSpec, assumptions):
    """Input literals entailed by ``f`` under ``assumptions`` (scan of the truth table)."""
    table = f.explicit().table
    rho = list(assumptions)
    models = []
    for a, v in enumerate(table):
        if not v:
            continue
        if all(((a >> (abs(l) - 1)) & 1) == (l > 0) for l in rho):
            models.append(a)
    if not models:
        return INCONSISTENT
    out = set()
    for v in range(1, f.n + 1):
        bits = {(a >> (v - 1)) & 1 for a in models}
        if bits == {1}:
            out.add(v)
        elif bits == {0}:
            out.add(-v)
    return frozenset(out)


@dataclass(frozen=True)
class SearchSpec:
    n: int
    function: FunctionSpec
    max_size: int = SAFE_SIZE
    require: str = "input-pc"
    unsafe_no_aux: bool = False
    prime_only: bool = True

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise SearchError(f"n must be between 1 and {MAX_N}")
        if self.function.n != self.n:
            raise SearchError("function arity does not match n")
        if not 1 <= self.max_size <= MAX_SIZE:
            raise SearchError(f"max_size must be between 1 and {MAX_SIZE}")
        if self.require not in REQUIREMENTS:
            raise SearchError(f"unknown requirement {self.require!r}")
        if self.max_size > SAFE_SIZE and not self.unsafe_no_aux:
            raise SearchError("budgets above 4 need unsafe_no_aux: without auxiliaries "
                              "the search cannot certify minimality there")


@dataclass
class SearchResult:
    size: Optional[int]
    witness: Optional[Encoding]
    nodes_explored: int
    candidates: int
    certified: bool

    @property
    def found(self) -> bool:
        return self.size is not None

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "size": self.size,
            "witness": None if self.witness is None
            else [sorted(c, key=abs) for c in sorted_formula(self.witness.formula)],
            "nodes_explored": self.nodes_explored,
            "candidates": self.candidates,
            "certified": self.certified,
            "note": None if self.certified else "not a minimality certificate",
        }


def all_clauses(n: int) -> list[frozenset]:
    """The 3^n - 1 non-tautological non-empty clauses on n variables, canonically ordered."""
    out = []
    for signs in product((0, 1, -1), repeat=n):
        lits = [s * (v + 1) for v, s in enumerate(signs) if s]
        if lits:
            out.append(make_clause(lits))
    return sorted(out, key=clause_key)


def _falsified_by(clause, a: int) -> bool:
    return all(((a >> (abs(l) - 1)) & 1) != (l > 0) for l in clause)


def _candidate_pool(f: FunctionSpec, prime_only: bool) -> list[frozenset]:
    table = f.explicit().table
    models = [a for a, v in enumerate(table) if v]

    def implicate(c) -> bool:
        return not any(_falsified_by(c, a) for a in models)

    pool = [c for c in all_clauses(f.n) if implicate(c)]
    if prime_only:
        pool = [c for c in pool if not any(implicate(c - {l}) for l in c)]
    return pool


def _table_of(formula, n: int) -> tuple[bool, ...]:
    return tuple(not any(_falsified_by(c, a) for c in formula) for a in range(1 << n))


def _p_conditions(formula, n: int) -> bool:
    for i in range(1, n + 1):
        closed = closure_set(formula, [i])
        if closed is None or any(-j not in closed for j in range(1, n + 1) if j != i):
            return False
    return True


def _input_pc(formula, f: FunctionSpec) -> bool:
    for rho in assumption_sets(range(1, f.n + 1)):
        sem = semantic_consequences(f, rho)
        closed = closure_set(formula, rho)
        if closed is None:
            continue
        if sem is INCONSISTENT or not sem <= closed:
            return False
    return True


def meets(formula, f: FunctionSpec, require: str) -> bool:
    """Whether an auxiliary-free formula on inputs 1..n meets the requirement.

    Every requirement includes representing ``f`` exactly.
    """
    if _table_of(formula, f.n) != f.explicit().table:
        return False
    if require == "p":
        return _p_conditions(formula, f.n)
    if require == "input-pc":
        return _input_pc(formula, f)
    return True


def _permute(clause, perm) -> frozenset:
    return frozenset(perm[abs(l) - 1] * (1 if l > 0 else -1) for l in clause)


def find_minimum(job: SearchSpec) -> SearchResult:
    """Smallest auxiliary-free formula meeting ``job.require`` for ``job.function``.

    Sizes are tried in ascending order and subsets of each size in
    colexicographic order; a subset is only tested when it is the
    colexicographic minimum among its images under input permutations, so
    the witness is the colex-first qualifying subset of the smallest size.
    """
    f = job.function
    pool = _candidate_pool(f, job.prime_only)
    index = {c: k for k, c in enumerate(pool)}
    perms = [p for p in permutations(range(1, job.n + 1))][1:]
    nodes = 0
    for k in range(1, job.max_size + 1):
        for subset in _colex(len(pool), k):
            nodes += 1
            if not _is_canonical(subset, pool, index, perms):
                continue
            formula = frozenset(pool[j] for j in subset)
            if meets(formula, f, job.require):
                enc = Encoding(formula, range(1, job.n + 1))
                return SearchResult(k, enc, nodes, len(pool), k <= SAFE_SIZE)
    return SearchResult(None, None, nodes, len(pool), job.max_size <= SAFE_SIZE)


def _colex(m: int, k: int):
    """k-subsets of range(m) as increasing tuples, in colexicographic order."""
    if k == 0:
        yield ()
        return
    for top in range(k - 1, m):
        for rest in _colex(top, k - 1):
            yield rest + (top,)


def _is_canonical(subset, pool, index, perms) -> bool:
    for perm in perms:
        image = []
        for j in subset:
            k = index.get(_permute(pool[j], perm))
            if k is None:
                break
            image.append(k)
        else:
            if sorted(image, reverse=True) < sorted(subset, reverse=True):
                return False
    return True
