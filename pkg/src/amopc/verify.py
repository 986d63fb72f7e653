"""Encoding correctness, p-encoding conditions, and propagation completeness."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from . import cnf
from .cnf import DEFAULT_LIMIT, Encoding, TooLarge, lit_key, variables
from .propagation import closure_set
from .sat import satisfiable

PC_INPUT_LIMIT = 12
FULL_PC_LIMIT = 16
DP_BUDGET = 200_000


class NotAnAMOorEO(ValueError):
    pass


@dataclass(frozen=True)
class FunctionSpec:
    """A boolean function of ``n`` inputs.

    ``table[a]`` is the value on the assignment whose bit ``i`` is input
    ``i + 1``; it is only stored for ``kind == "explicit"``.
    """

    kind: str  # "AMO", "EO" or "explicit"
    n: int
    table: Optional[tuple[bool, ...]] = None

    def __post_init__(self):
        if self.kind not in ("AMO", "EO", "explicit"):
            raise ValueError(f"unknown function kind {self.kind!r}")
        if self.kind == "explicit":
            if self.table is None or len(self.table) != 1 << self.n:
                raise ValueError("explicit table needs exactly 2^n entries")
            object.__setattr__(self, "table", tuple(bool(v) for v in self.table))
        elif self.table is not None:
            raise ValueError("only explicit functions carry a table")

    @classmethod
    def amo(cls, n: int) -> "FunctionSpec":
        return cls("AMO", n)

    @classmethod
    def eo(cls, n: int) -> "FunctionSpec":
        return cls("EO", n)

    def values(self) -> np.ndarray:
        if self.kind == "explicit":
            return np.array(self.table, dtype=bool)
        idx = np.arange(1 << self.n, dtype=np.int64)
        counts = np.zeros_like(idx)
        for i in range(self.n):
            counts += (idx >> i) & 1
        return counts <= 1 if self.kind == "AMO" else counts == 1

    def model_masks(self) -> list[int]:
        if self.kind == "AMO":
            return [0] + [1 << i for i in range(self.n)]
        if self.kind == "EO":
            return [1 << i for i in range(self.n)]
        return [a for a, v in enumerate(self.table) if v]

    def explicit(self) -> "FunctionSpec":
        if self.kind == "explicit":
            return self
        return FunctionSpec("explicit", self.n, tuple(self.values().tolist()))

    def same_function(self, other: "FunctionSpec") -> bool:
        return self.n == other.n and bool(np.array_equal(self.values(), other.values()))


@dataclass
class PCReport:
    verdict: bool
    witness: Optional[dict] = None
    checked_count: int = 0
    mode: str = ""
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.verdict

    def to_dict(self) -> dict:
        out = {"mode": self.mode, "verdict": self.verdict, "checked_count": self.checked_count,
               "witness": self.witness}
        if self.details:
            out["details"] = self.details
        return out


# -- encoded function --------------------------------------------------------

def _table_by_enumeration(enc: Encoding, limit: int) -> np.ndarray:
    aux = sorted(enc.occurring_auxiliaries())
    order = enc.inputs + tuple(aux)
    order, ms = cnf.models(enc.formula, order, limit)
    table = np.zeros(1 << enc.n, dtype=bool)
    table[ms & ((1 << enc.n) - 1)] = True
    return table


def encoded_function(enc: Encoding, limit: int = DEFAULT_LIMIT,
                     budget: int = DP_BUDGET) -> FunctionSpec:
    """Truth table of the inputs' projection of ``enc``.

    Enumerates directly within ``limit`` total variables, otherwise removes
    auxiliaries by DP-elimination (fewest occurrences first) as long as the
    total number of resolvents stays within ``budget``.
    """
    if enc.n > limit:
        raise TooLarge(f"{enc.n} inputs exceed the enumeration limit {limit}")
    if len(enc.inputs) + len(enc.occurring_auxiliaries()) <= limit:
        return FunctionSpec("explicit", enc.n, tuple(_table_by_enumeration(enc, limit).tolist()))
    formula = enc.formula
    spent = 0
    aux = set(enc.occurring_auxiliaries())
    while aux and len(enc.inputs) + len(aux) > limit:
        y = min(aux, key=lambda v: (cnf.occurrences(formula, v), v))
        before = len(formula)
        formula = cnf.dp_eliminate(formula, y)
        spent += max(0, len(formula) - before) + cnf.occurrences(enc.formula, y)
        if spent > budget:
            raise TooLarge("DP-elimination exceeded the resolvent budget")
        aux.discard(y)
        aux &= variables(formula)
    reduced = Encoding(formula, enc.inputs, aux)
    return FunctionSpec("explicit", enc.n, tuple(_table_by_enumeration(reduced, limit).tolist()))


def is_encoding_of(enc: Encoding, f: FunctionSpec, limit: int = DEFAULT_LIMIT) -> bool:
    if f.n != enc.n:
        return False
    return encoded_function(enc, limit).same_function(f)


def classify(enc: Encoding, limit: int = DEFAULT_LIMIT) -> str:
    g = encoded_function(enc, limit)
    if g.same_function(FunctionSpec.amo(enc.n)):
        return "AMO"
    if g.same_function(FunctionSpec.eo(enc.n)):
        return "EO"
    return "neither"


def function_for(kind: str, enc: Encoding, limit: int = DEFAULT_LIMIT) -> FunctionSpec:
    """Resolve ``amo`` / ``eo`` / ``auto`` to a FunctionSpec for ``enc``."""
    kind = kind.lower()
    if kind == "amo":
        return FunctionSpec.amo(enc.n)
    if kind == "eo":
        return FunctionSpec.eo(enc.n)
    if kind == "auto":
        c = classify(enc, limit)
        if c == "neither":
            raise NotAnAMOorEO("encoding represents neither AMO nor EO")
        return FunctionSpec(c, enc.n)
    raise ValueError(f"unknown function {kind!r}")


# -- p-encoding conditions ---------------------------------------------------

def check_p_conditions(enc: Encoding) -> PCReport:
    """P1: each ``φ ∧ x_i`` is satisfiable.  P2: ``φ ∧ x_i ⊢1 ¬x_j`` for i ≠ j.

    Satisfiability uses an exact search, so this works beyond the
    enumeration limit.
    """
    xs = enc.inputs
    checked = 0
    for i, x in enumerate(xs, start=1):
        checked += 1
        if not satisfiable(enc.formula, [x]):
            return PCReport(False, {"condition": "P1", "input": i}, checked, "p")
    for i, x in enumerate(xs, start=1):
        closed = closure_set(enc.formula, [x])
        for j, y in enumerate(xs, start=1):
            if j == i:
                continue
            checked += 1
            if closed is None:
                return PCReport(False, {"condition": "P2", "pair": [i, j], "conflict": True},
                                checked, "p")
            if -y not in closed:
                return PCReport(False, {"condition": "P2", "pair": [i, j]}, checked, "p")
    return PCReport(True, None, checked, "p")


def is_p_encoding(enc: Encoding) -> bool:
    return check_p_conditions(enc).verdict


# -- propagation completeness ------------------------------------------------

def assumption_sets(vars_: Iterable[int]) -> Iterator[tuple[int, ...]]:
    """Non-empty consistent literal sets over ``vars_``: by size, then lexicographic."""
    vs = sorted(vars_)

    def rec(start: int, k: int):
        if k == 0:
            yield ()
            return
        for p in range(start, len(vs) - k + 1):
            v = vs[p]
            for l in (v, -v):
                for rest in rec(p + 1, k - 1):
                    yield (l,) + rest

    for k in range(1, len(vs) + 1):
        yield from rec(0, k)


def _fast_sets(n: int, kind: str) -> Iterator[tuple[int, ...]]:
    for i in range(1, n + 1):
        yield (i,)
    if kind == "EO":
        for i in range(n, 0, -1):
            yield tuple(-j for j in range(1, n + 1) if j != i)


def _check_sets(formula, positions: dict[int, int], model_masks: list[int],
                sets: Iterable[tuple[int, ...]], lits_order: list[int]):
    """Shared sweep: ``positions`` maps variable -> bit in ``model_masks``."""
    full = 0
    for b in positions.values():
        full |= 1 << b
    checked = 0
    for rho in sets:
        checked += 1
        pos = neg = 0
        for l in rho:
            bit = 1 << positions[abs(l)]
            if l > 0:
                pos |= bit
            else:
                neg |= bit
        and_all, or_all, any_model = full, 0, False
        for m in model_masks:
            if (m & pos) == pos and (m & neg) == 0:
                and_all &= m
                or_all |= m
                any_model = True
        closed = closure_set(formula, rho)
        if closed is None:
            continue
        if not any_model:
            missed = next((l for l in lits_order if l not in closed), None)
            return checked, {"assumptions": list(rho), "literal": missed, "inconsistent": True}
        for l in lits_order:
            bit = 1 << positions[abs(l)]
            entailed = (and_all & bit) if l > 0 else not (or_all & bit)
            if entailed and l not in closed:
                return checked, {"assumptions": list(rho), "literal": l}
    return checked, None


def is_input_pc(enc: Encoding, f: FunctionSpec, fast: bool = False,
                limit: int = PC_INPUT_LIMIT) -> PCReport:
    """Exhaustive input-level propagation completeness check.

    Every non-empty consistent set of input literals is tried; the empty set
    is left to :func:`cnf.unit_implicates`.  With ``fast`` only single
    positive assumptions (and, for EO, all-but-one negatives) are tried.
    """
    if f.n != enc.n:
        raise ValueError("function arity does not match the encoding")
    if enc.n > limit:
        raise TooLarge(f"{enc.n} inputs exceed the exhaustive cap {limit}")
    positions = {v: i for i, v in enumerate(enc.inputs)}
    order = sorted(enc.inputs)
    lits = [l for v in order for l in (v, -v)]
    if fast:
        if f.kind == "explicit":
            raise ValueError("the fast path only covers AMO and EO")
        sets = (tuple(enc.inputs[abs(l) - 1] * (1 if l > 0 else -1) for l in s)
                for s in _fast_sets(enc.n, f.kind))
    else:
        sets = assumption_sets(order)
    checked, witness = _check_sets(enc.formula, positions, f.model_masks(), sets, lits)
    if witness is not None and f.n:
        witness = dict(witness)
        witness["assumption_indices"] = [_index(enc, l) for l in witness["assumptions"]]
    return PCReport(witness is None, witness, checked, "input-pc", {"fast": fast})


def _index(enc: Encoding, lit: int) -> int:
    i = enc.inputs.index(abs(lit)) + 1
    return i if lit > 0 else -i


def is_full_pc(formula, limit: int = FULL_PC_LIMIT) -> PCReport:
    """Propagation completeness with assumptions and consequences on all variables."""
    formula = frozenset(formula)
    vs = sorted(variables(formula))
    if len(vs) > limit:
        raise TooLarge(f"{len(vs)} variables exceed the full-PC cap {limit}")
    order, ms = cnf.models(formula, vs, max(limit, len(vs)))
    positions = {v: i for i, v in enumerate(order)}
    lits = [l for v in vs for l in (v, -v)]
    checked, witness = _check_sets(formula, positions, [int(m) for m in ms],
                                   assumption_sets(vs), lits)
    return PCReport(witness is None, witness, checked, "full-pc")


def prime_report(enc: Encoding, limit: int = DEFAULT_LIMIT) -> PCReport:
    check = cnf.implicate_oracle(enc.formula, limit)
    checked = 0
    for clause in enc.clauses():
        for l in cnf.sorted_clause(clause):
            checked += 1
            if check(clause - {l}):
                return PCReport(False, {"clause": cnf.sorted_clause(clause),
                                        "removable": l}, checked, "prime")
    units = cnf.unit_implicates(enc.formula, limit)
    return PCReport(True, None, checked, "prime",
                    {"unit_implicates": sorted(units, key=lit_key)})


# -- auxiliary occurrence diagnostic -----------------------------------------

def sparse_auxiliaries(enc: Encoding) -> list[dict]:
    """Auxiliaries with at most 4 occurrences: DP-elimination cannot grow the formula."""
    out = []
    for y in sorted(enc.occurring_auxiliaries()):
        k = cnf.occurrences(enc.formula, y)
        if k <= 4:
            out.append({"variable": y, "occurrences": k,
                        "advisory": "reducible via DP-elimination"})
    return out
