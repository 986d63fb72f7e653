"""CNF data model and the syntactic/semantic operations built on it.

Literals are nonzero signed integers in the DIMACS convention: ``v`` is the
positive literal of variable ``v`` and ``-v`` its negation.  A clause is a
``frozenset`` of literals, a formula is a ``frozenset`` of clauses.  The empty
clause (``BOTTOM``) is the contradiction.  All values are immutable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

Clause = frozenset
Formula = frozenset

BOTTOM: Clause = frozenset()
DEFAULT_LIMIT = 24


class CNFError(Exception):
    pass


class Tautological(CNFError):
    pass


class NotResolvable(CNFError):
    pass


class TooLarge(CNFError):
    pass


class Unsatisfiable(CNFError):
    pass


class InvalidEncoding(CNFError):
    pass


# -- ordering ---------------------------------------------------------------

def lit_key(lit: int) -> tuple[int, int]:
    """Total order on literals: by variable, positive before negative."""
    return (abs(lit), 0 if lit > 0 else 1)


def clause_key(clause: Iterable[int]) -> tuple:
    lits = sorted(clause, key=lit_key)
    return (len(lits), tuple(lit_key(l) for l in lits))


def sorted_clause(clause: Iterable[int]) -> list[int]:
    return sorted(clause, key=lit_key)


def sorted_formula(formula: Iterable[Clause]) -> list[Clause]:
    return sorted(formula, key=clause_key)


def fmt_clause(clause: Iterable[int]) -> str:
    lits = sorted_clause(clause)
    if not lits:
        return "⊥"
    return "(" + " ∨ ".join(f"x{l}" if l > 0 else f"¬x{-l}" for l in lits) + ")"


# -- construction -----------------------------------------------------------

def make_clause(literals: Iterable[int]) -> Clause:
    lits = frozenset(literals)
    if 0 in lits:
        raise ValueError("0 is not a literal")
    for l in lits:
        if -l in lits:
            raise Tautological(f"complementary pair on variable {abs(l)}")
    return lits


def make_formula(clauses: Iterable[Iterable[int]]) -> Formula:
    return frozenset(make_clause(c) for c in clauses)


def variables(formula: Iterable[Clause]) -> frozenset[int]:
    return frozenset(map(abs, frozenset().union(*formula)))


def is_2cnf(formula: Iterable[Clause]) -> bool:
    return all(len(c) <= 2 for c in formula)


@dataclass(frozen=True)
class Encoding:
    """A formula with its variables split into ordered inputs and auxiliaries.

    Auxiliaries may list variables that no longer occur (e.g. after a
    reduction); every occurring variable must be declared on one side.
    """

    formula: Formula
    inputs: tuple[int, ...]
    auxiliaries: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "formula", frozenset(self.formula))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "auxiliaries", frozenset(self.auxiliaries))
        if not self.inputs:
            raise InvalidEncoding("an encoding needs at least one input")
        if len(set(self.inputs)) != len(self.inputs):
            raise InvalidEncoding("duplicate input variable")
        if any(v <= 0 for v in self.inputs) or any(v <= 0 for v in self.auxiliaries):
            raise InvalidEncoding("variables are positive integers")
        if set(self.inputs) & self.auxiliaries:
            raise InvalidEncoding("inputs and auxiliaries overlap")
        undeclared = variables(self.formula) - set(self.inputs) - self.auxiliaries
        if undeclared:
            raise InvalidEncoding(f"undeclared variables {sorted(undeclared)}")

    @property
    def n(self) -> int:
        return len(self.inputs)

    @property
    def size(self) -> int:
        return len(self.formula)

    def __len__(self) -> int:
        return len(self.formula)

    @property
    def all_variables(self) -> tuple[int, ...]:
        """Inputs in order, then auxiliaries ascending."""
        return self.inputs + tuple(sorted(self.auxiliaries))

    def occurring_auxiliaries(self) -> frozenset[int]:
        return self.auxiliaries & variables(self.formula)

    def clauses(self) -> list[Clause]:
        return sorted_formula(self.formula)

    def with_formula(self, formula: Iterable[Clause], inputs=None) -> "Encoding":
        formula = frozenset(formula)
        inputs = self.inputs if inputs is None else tuple(inputs)
        occurring = variables(formula)
        aux = (self.auxiliaries | (set(self.inputs) - set(inputs))) & occurring
        return Encoding(formula, inputs, aux)

    def compact(self) -> "Encoding":
        """Renumber to inputs 1..n and occurring auxiliaries n+1.. (ascending)."""
        aux = sorted(self.occurring_auxiliaries())
        mapping = {v: i + 1 for i, v in enumerate(self.inputs + tuple(aux))}
        return Encoding(rename(self.formula, mapping), range(1, self.n + 1),
                        range(self.n + 1, self.n + 1 + len(aux)))


def rename(formula: Iterable[Clause], mapping: dict[int, int]) -> Formula:
    """Rename variables by ``mapping`` (a bijection on the variables it touches)."""
    out = set()
    for c in formula:
        out.add(frozenset((mapping.get(abs(l), abs(l)) * (1 if l > 0 else -1)) for l in c))
    return frozenset(out)


# -- syntactic operations ---------------------------------------------------

def resolve(c1: Clause, c2: Clause) -> Clause:
    clashes = [l for l in c1 if -l in c2]
    if len(clashes) != 1:
        raise NotResolvable(f"{len(clashes)} clashing literals")
    l = clashes[0]
    return frozenset((c1 | c2) - {l, -l})


def substitute(formula: Iterable[Clause], g1: int, g2: int) -> Formula:
    """Replace ``g1`` by ``g2`` (and ``-g1`` by ``-g2``); tautologies vanish."""
    if abs(g1) == abs(g2):
        raise ValueError("substitution needs two different variables")

    def t(l: int) -> int:
        if l == g1:
            return g2
        if l == -g1:
            return -g2
        return l

    out = set()
    for c in formula:
        img = frozenset(t(l) for l in c)
        if any(-l in img for l in img):
            continue
        out.add(img)
    return frozenset(out)


def assign(formula: Iterable[Clause], rho: Iterable[int]) -> Formula:
    """Apply a partial assignment given as a set of true literals."""
    rho = frozenset(rho)
    if any(-l in rho for l in rho):
        raise ValueError("partial assignment contains a complementary pair")
    out = set()
    for c in formula:
        if c & rho:
            continue
        out.add(frozenset(l for l in c if -l not in rho))
    return frozenset(out)


def dp_eliminate(formula: Iterable[Clause], y: int) -> Formula:
    """Replace all clauses on ``y`` by their non-tautological resolvents on ``y``."""
    formula = frozenset(formula)
    pos = [c for c in formula if y in c]
    neg = [c for c in formula if -y in c]
    if not pos and not neg:
        raise ValueError(f"variable {y} does not occur")
    rest = {c for c in formula if y not in c and -y not in c}
    for a in pos:
        for b in neg:
            r = (a - {y}) | (b - {-y})
            if any(-l in r for l in r):
                continue
            rest.add(frozenset(r))
    return frozenset(rest)


def occurrences(formula: Iterable[Clause], v: int) -> int:
    return sum(1 for c in formula if v in c or -v in c)


# -- semantics by enumeration -----------------------------------------------

_CHUNK = 1 << 18


def _clause_masks(clause: Iterable[int], index: dict[int, int]) -> tuple[int, int]:
    pos = neg = 0
    for l in clause:
        bit = 1 << index[abs(l)]
        if l > 0:
            pos |= bit
        else:
            neg |= bit
    return pos, neg


def models(formula: Iterable[Clause], order: Iterable[int] | None = None,
           limit: int = DEFAULT_LIMIT) -> tuple[tuple[int, ...], np.ndarray]:
    """All satisfying assignments by exhaustive enumeration.

    Returns ``(order, masks)`` where bit ``k`` of each mask is the value of
    ``order[k]``.  ``order`` defaults to the formula's variables ascending and
    may list extra (free) variables.
    """
    formula = list(formula)
    if order is None:
        order = sorted(variables(formula))
    order = tuple(order)
    missing = variables(formula) - set(order)
    if missing:
        raise ValueError(f"order misses variables {sorted(missing)}")
    if len(order) > limit:
        raise TooLarge(f"{len(order)} variables exceed the enumeration limit {limit}")
    index = {v: k for k, v in enumerate(order)}
    masks = [_clause_masks(c, index) for c in formula]
    if any(p == 0 and q == 0 for p, q in masks):
        return order, np.zeros(0, dtype=np.int64)
    total = 1 << len(order)
    found = []
    for start in range(0, total, _CHUNK):
        m = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        for pos, neg in masks:
            m = m[((m & pos) != 0) | ((m & neg) != neg)]
            if m.size == 0:
                break
        found.append(m)
    return order, np.concatenate(found)


def _falsifies(masks: np.ndarray, clause: Iterable[int], index: dict[int, int]) -> np.ndarray:
    pos, neg = _clause_masks(clause, index)
    return ((masks & pos) == 0) & ((masks & neg) == neg)


def is_implicate(formula: Iterable[Clause], clause: Iterable[int],
                 limit: int = DEFAULT_LIMIT) -> bool:
    """Decide ``formula |= clause`` by enumerating all assignments."""
    formula = frozenset(formula)
    clause = frozenset(clause)
    order = sorted(variables(formula) | {abs(l) for l in clause})
    order, ms = models(formula, order, limit)
    index = {v: k for k, v in enumerate(order)}
    return not bool(_falsifies(ms, clause, index).any())


def implicate_oracle(formula: Iterable[Clause],
                     limit: int = DEFAULT_LIMIT) -> Callable[[Iterable[int]], bool]:
    """A reusable ``clause -> formula |= clause`` test.

    Enumerates models once when the formula fits within ``limit`` variables;
    beyond that every query is an exact refutation search.
    """
    formula = frozenset(formula)
    vs = variables(formula)
    if len(vs) <= limit:
        order, ms = models(formula, sorted(vs), limit)
        index = {v: k for k, v in enumerate(order)}

        def check(clause):
            clause = frozenset(clause)
            # a literal on a variable outside the formula is always falsifiable
            inner = frozenset(l for l in clause if abs(l) in index)
            return not bool(_falsifies(ms, inner, index).any())
        return check

    from .sat import entails

    return lambda clause: entails(formula, clause)


def prime_subclause(clause: Clause, check: Callable[[Iterable[int]], bool]) -> Clause:
    """The canonically first implicate contained in ``clause``; it is prime."""
    lits = sorted_clause(clause)
    for k in range(len(lits) + 1):
        for sub in itertools.combinations(lits, k):
            if check(sub):
                return frozenset(sub)
    raise ValueError(f"{fmt_clause(clause)} is not an implicate")


def prime_reduce(formula: Iterable[Clause], limit: int = DEFAULT_LIMIT) -> Formula:
    formula = frozenset(formula)
    check = implicate_oracle(formula, limit)
    if check(()):
        raise Unsatisfiable("prime reduction needs a satisfiable formula")
    return frozenset(prime_subclause(c, check) for c in formula)


def is_prime(formula: Iterable[Clause], limit: int = DEFAULT_LIMIT) -> bool:
    formula = frozenset(formula)
    check = implicate_oracle(formula, limit)
    return all(not check(c - {l}) for c in formula for l in c)


def unit_implicates(formula: Iterable[Clause], limit: int = DEFAULT_LIMIT) -> frozenset[int]:
    formula = frozenset(formula)
    check = implicate_oracle(formula, limit)
    out = set()
    for v in sorted(variables(formula)):
        for l in (v, -v):
            if check((l,)):
                out.add(l)
    return frozenset(out)
