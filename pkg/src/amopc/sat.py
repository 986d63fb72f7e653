"""Small exact satisfiability search (unit propagation plus branching).

Used where exhaustive enumeration would exceed the variable limit, e.g. the
satisfiability half of the p-encoding conditions on large product encodings.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .cnf import Clause
from .propagation import _compile, _run


def find_model(formula: Iterable[Clause], assumptions: Iterable[int] = ()) -> Optional[frozenset]:
    """A set of true literals satisfying every clause, or ``None``.

    Variables absent from the returned set are unconstrained.
    """
    comp = _compile(frozenset(formula))
    stack = [sorted(set(assumptions), key=abs)]
    while stack:
        assumed = stack.pop()
        ok, true, _ = _run(comp, assumed, False)
        if not ok:
            continue
        branch = None
        for c in comp.clauses:
            if any(l in true for l in c):
                continue
            branch = next(l for l in c if -l not in true)
            break
        if branch is None:
            return frozenset(true)
        base = sorted(true, key=abs)
        stack.append(base + [-branch])
        stack.append(base + [branch])
    return None


def satisfiable(formula: Iterable[Clause], assumptions: Iterable[int] = ()) -> bool:
    return find_model(formula, assumptions) is not None


def entails(formula: Iterable[Clause], clause: Iterable[int]) -> bool:
    """``formula |= clause`` decided by refuting ``formula ∧ ¬clause``."""
    return not satisfiable(formula, [-l for l in clause])
