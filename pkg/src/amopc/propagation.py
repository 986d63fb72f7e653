"""Unit propagation closure with derivation traces."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .cnf import Clause, fmt_clause, lit_key, sorted_clause, sorted_formula


@dataclass(frozen=True)
class UPOutcome:
    """Result of unit propagation.

    ``derived`` includes the assumptions.  Each trace step is the clause used
    and the literal it produced, or ``None`` for the falsified clause that
    ends a conflict.
    """

    kind: str  # "closure" or "conflict"
    derived: frozenset
    trace: tuple

    @property
    def conflict(self) -> bool:
        return self.kind == "conflict"

    def __contains__(self, lit: int) -> bool:
        return self.conflict or lit in self.derived


class _Compiled:
    __slots__ = ("clauses", "occ", "units")

    def __init__(self, formula: frozenset):
        self.clauses = [tuple(sorted_clause(c)) for c in sorted_formula(formula)]
        occ: dict[int, list[int]] = {}
        for idx, c in enumerate(self.clauses):
            for l in c:
                occ.setdefault(l, []).append(idx)
        self.occ = occ
        self.units = [idx for idx, c in enumerate(self.clauses) if len(c) <= 1]


@lru_cache(maxsize=512)
def _compile(formula: frozenset) -> _Compiled:
    return _Compiled(formula)


def _run(comp: _Compiled, assumptions: list[int], want_trace: bool):
    true = set()
    trace = []
    queue = deque()
    for a in assumptions:
        if -a in true:
            raise ValueError("assumptions contain a complementary pair")
        if a not in true:
            true.add(a)
            queue.append(a)

    clauses = comp.clauses
    for idx in comp.units:
        c = clauses[idx]
        if not c:
            if want_trace:
                trace.append((frozenset(), None))
            return False, true, trace
        l = c[0]
        if l in true:
            continue
        if -l in true:
            if want_trace:
                trace.append((frozenset(c), None))
            return False, true, trace
        true.add(l)
        queue.append(l)
        if want_trace:
            trace.append((frozenset(c), l))

    occ = comp.occ
    while queue:
        l = queue.popleft()
        for idx in occ.get(-l, ()):
            c = clauses[idx]
            free = None
            nfree = 0
            sat = False
            for m in c:
                if m in true:
                    sat = True
                    break
                if -m not in true:
                    nfree += 1
                    free = m
                    if nfree > 1:
                        break
            if sat or nfree > 1:
                continue
            if nfree == 0:
                if want_trace:
                    trace.append((frozenset(c), None))
                return False, true, trace
            true.add(free)
            queue.append(free)
            if want_trace:
                trace.append((frozenset(c), free))
    return True, true, trace


def _canonical(assumptions: Iterable[int]) -> list[int]:
    return sorted(set(assumptions), key=lit_key)


def up_closure(formula: Iterable[Clause], assumptions: Iterable[int] = ()) -> UPOutcome:
    """Least fixed point of unit resolution on ``formula`` plus ``assumptions``."""
    comp = _compile(frozenset(formula))
    ok, true, trace = _run(comp, _canonical(assumptions), True)
    return UPOutcome("closure" if ok else "conflict", frozenset(true), tuple(trace))


def closure_set(formula: Iterable[Clause], assumptions: Iterable[int] = ()) -> Optional[frozenset]:
    """Derived literals without a trace, or ``None`` on conflict."""
    comp = _compile(frozenset(formula))
    ok, true, _ = _run(comp, _canonical(assumptions), False)
    return frozenset(true) if ok else None


def derives(formula: Iterable[Clause], assumptions: Iterable[int], h: int) -> bool:
    """True iff ``formula ∧ assumptions ⊢1 h`` or ``⊢1 ⊥``."""
    closed = closure_set(formula, assumptions)
    return closed is None or h in closed


def render_trace(outcome: UPOutcome) -> str:
    lines = []
    for clause, lit in outcome.trace:
        target = "⊥" if lit is None else (f"x{lit}" if lit > 0 else f"¬x{-lit}")
        lines.append(f"{fmt_clause(clause)} -> {target}")
    return "\n".join(lines)
