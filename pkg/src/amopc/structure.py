"""Structure of p-encodings: Q-sets, regular form, star analysis, reductions,
and implication-graph diagnostics for 2-CNF encodings.

Inputs are addressed by their 1-based position ``i`` in ``enc.inputs``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import networkx as nx

from . import cnf
from .bounds import lower_bound_2cnf, lower_bound_2cnf_sqrt_branch
from .cnf import Clause, Encoding, fmt_clause, lit_key, sorted_clause
from .propagation import closure_set
from .verify import check_p_conditions


class StructureError(ValueError):
    pass


class NotAPEncoding(StructureError):
    pass


class NotRegular(StructureError):
    pass


class AlreadyRegular(StructureError):
    pass


class NotPrime(StructureError):
    pass


class TooFewInputs(StructureError):
    pass


class NotTwoCNF(StructureError):
    pass


def _lit_str(l: int) -> str:
    return f"x{l}" if l > 0 else f"¬x{-l}"


def _lits(ls) -> list[int]:
    return sorted(ls, key=lit_key)


# -- Q-sets and regular form ------------------------------------------------

@dataclass(frozen=True)
class QSets:
    sets: dict[int, tuple[Clause, ...]]
    uncovered: tuple[Clause, ...]

    def __getitem__(self, i: int) -> tuple[Clause, ...]:
        return self.sets[i]

    def sizes(self) -> list[int]:
        return [len(self.sets[i]) for i in sorted(self.sets)]


def q_sets(enc: Encoding) -> QSets:
    """``Q_i``: the clauses containing the negative literal of input ``i``."""
    sets = {}
    covered = set()
    for i, x in enumerate(enc.inputs, start=1):
        qi = tuple(c for c in enc.clauses() if -x in c)
        sets[i] = qi
        covered.update(qi)
    uncovered = tuple(c for c in enc.clauses() if c not in covered)
    return QSets(sets, uncovered)


@dataclass
class StarData:
    I: dict[int, tuple[int, ...]]
    L: dict[int, frozenset]
    M: dict[int, frozenset]
    g: int
    i: int
    checks: dict

    def to_dict(self) -> dict:
        return {
            "I": {_lit_str(h): list(v) for h, v in sorted(self.I.items(), key=lambda kv: lit_key(kv[0]))},
            "L_sizes": {_lit_str(h): len(v) for h, v in sorted(self.L.items(), key=lambda kv: lit_key(kv[0]))},
            "M_sizes": {str(i): len(m) for i, m in sorted(self.M.items())},
            "g": _lit_str(self.g),
            "i": self.i,
            "checks": self.checks,
        }


@dataclass
class StructureReport:
    n: int
    q_sizes: list[int]
    r1: list[bool]
    r2: list[bool]
    r3: list[bool]
    type_q: Optional[list[Clause]] = None
    type_r: Optional[list[Clause]] = None
    pa: Optional[dict[int, frozenset]] = None
    star: Optional[StarData] = None

    @property
    def regular(self) -> bool:
        return all(self.r1) and all(self.r2) and all(self.r3)

    @property
    def pb(self) -> Optional[dict[int, frozenset]]:
        if self.pa is None:
            return None
        return {i: frozenset(abs(l) for l in p) for i, p in self.pa.items()}

    def first_failure(self, cond: str) -> Optional[int]:
        verdicts = {"R1": self.r1, "R2": self.r2, "R3": self.r3}[cond]
        return next((i for i, ok in enumerate(verdicts, start=1) if not ok), None)

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "q_sizes": self.q_sizes,
            "regular": self.regular,
            "conditions": {"R1": self.r1, "R2": self.r2, "R3": self.r3},
        }
        if self.regular:
            out["type_q"] = len(self.type_q)
            out["type_r"] = len(self.type_r)
            out["PA"] = {str(i): [_lit_str(l) for l in _lits(p)] for i, p in self.pa.items()}
        if self.star is not None:
            out["star"] = self.star.to_dict()
        return out


def check_regular(enc: Encoding, verify: bool = True) -> StructureReport:
    """Per-input verdicts for the three regular-form conditions.

    R1: ``|Q_i| = 2``; R2: the clauses of ``Q_i`` mention no other input;
    R3: they are binary.
    """
    if verify:
        rep = check_p_conditions(enc)
        if not rep.verdict:
            raise NotAPEncoding(f"not a p-encoding: {rep.witness}")
    inputs = set(enc.inputs)
    qs = q_sets(enc)
    r1, r2, r3 = [], [], []
    for i, x in enumerate(enc.inputs, start=1):
        qi = qs[i]
        r1.append(len(qi) == 2)
        r2.append(all(abs(l) not in inputs for c in qi for l in c if l != -x))
        r3.append(all(len(c) == 2 for c in qi))
    report = StructureReport(enc.n, qs.sizes(), r1, r2, r3)
    if report.regular:
        type_q = [c for i in sorted(qs.sets) for c in qs[i]]
        qset = set(type_q)
        report.type_q = type_q
        report.type_r = [c for c in enc.clauses() if c not in qset]
        report.pa = {i: frozenset(l for c in qs[i] for l in c if l != -x)
                     for i, x in enumerate(enc.inputs, start=1)}
    return report


def is_regular(enc: Encoding) -> bool:
    return check_regular(enc, verify=False).regular


# -- star analysis ------------------------------------------------------------

def star_analysis(enc: Encoding, report: Optional[StructureReport] = None) -> StructureReport:
    """Fill in ``I_h``, ``L_h`` for every auxiliary literal in a PA set and
    ``M_i`` (auxiliary literals propagated from ``x_i``) for every input."""
    if report is None:
        report = check_regular(enc)
    if not report.regular:
        raise NotRegular("star analysis needs an encoding in regular form")
    pa = report.pa
    lits = _lits({l for p in pa.values() for l in p})
    I = {h: tuple(i for i in sorted(pa) if h in pa[i]) for h in lits}
    L = {h: frozenset().union(*(pa[i] for i in I[h])) for h in lits}
    aux = enc.auxiliaries
    M = {}
    for i, x in enumerate(enc.inputs, start=1):
        closed = closure_set(enc.formula, [x]) or frozenset()
        M[i] = frozenset(l for l in closed if abs(l) in aux)

    star_ok = True
    for h in lits:
        if len(I[h]) >= 3:
            distinct_vars = len({abs(l) for l in L[h]}) == len(L[h])
            if not (len(L[h]) == len(I[h]) + 1 and distinct_vars):
                star_ok = False
    g = max(lits, key=lambda h: (len(I[h]), [-k for k in lit_key(h)]))
    i0 = I[g][0]
    m = len(M[i0])
    n_r = len(report.type_r)
    checks = {
        "star_leaves": star_ok,
        "max_I": len(I[g]),
        "M_i_size": m,
        "type_r": n_r,
        "product_ok": m * len(I[g]) >= enc.n - 1,
        "type_r_ok": n_r >= m - 2,
        "M_vs_I_ok": len(I[g]) < 3 or m >= len(I[g]) + 1,
    }
    report.star = StarData(I, L, M, g, i0, checks)
    return report


def pa_distinct(report: StructureReport) -> bool:
    pas = list(report.pa.values())
    return len(set(pas)) == len(pas)


# -- reduction steps ------------------------------------------------------------

def _assign_zero(enc: Encoding, i: int) -> Encoding:
    x = enc.inputs[i - 1]
    formula = cnf.assign(enc.formula, [-x])
    inputs = enc.inputs[: i - 1] + enc.inputs[i:]
    return enc.with_formula(formula, inputs)


def _substitute_single(enc: Encoding, i: int) -> Encoding:
    """Rule (i): ``Q_i = {¬x_i ∨ e}`` with auxiliary ``e``; replace ``e`` by ``x_i``."""
    x = enc.inputs[i - 1]
    qi = q_sets(enc)[i]
    if len(qi) != 1:
        raise StructureError(f"|Q_{i}| = {len(qi)}, expected 1")
    (c,) = qi
    if len(c) != 2:
        raise NotPrime(f"single clause {fmt_clause(c)} on ¬x{x} is not binary")
    (e,) = c - {-x}
    if abs(e) not in enc.auxiliaries:
        raise NotPrime(f"partner of ¬x{x} in {fmt_clause(c)} is an input literal")
    return enc.with_formula(cnf.substitute(enc.formula, e, x))


def _select_rule(enc: Encoding, report: StructureReport) -> tuple[str, int]:
    sizes = report.q_sizes
    for i, s in enumerate(sizes, start=1):
        if s >= 3:
            return "ii", i
    for i, s in enumerate(sizes, start=1):
        if s == 1:
            return "i", i
    for i, s in enumerate(sizes, start=1):
        if s == 0:
            raise NotAPEncoding(f"input {i} has no negative occurrence")
    i = report.first_failure("R2")
    if i is not None:
        return "iii", i
    i = report.first_failure("R3")
    if i is not None:
        return "iv", i
    raise AlreadyRegular("encoding is already in regular form")


def reduce_step(enc: Encoding, check_prime: bool = True,
                limit: int = cnf.DEFAULT_LIMIT) -> tuple[Encoding, str]:
    """Apply one structural reduction to a prime p-encoding not in regular form.

    Rules are tried in the order (ii), (i), (iii), (iv), each at the lowest
    input index where it applies.  The result is a p-encoding that is either
    at least one clause smaller with the same inputs (rules i and iv) or at
    least three clauses smaller with one input fewer (rules ii and iii).
    """
    if enc.n < 3:
        raise TooFewInputs("reductions need at least 3 inputs")
    report = check_regular(enc)
    if report.regular:
        raise AlreadyRegular("encoding is already in regular form")
    if check_prime and not cnf.is_prime(enc.formula, limit):
        raise NotPrime("reductions need a prime formula")
    rule, i = _select_rule(enc, report)
    if rule in ("iii", "iv") and enc.n < 4:
        raise TooFewInputs(f"rule ({rule}) needs at least 4 inputs")
    x = enc.inputs[i - 1]

    if rule == "ii":
        return _assign_zero(enc, i), rule
    if rule == "i":
        return _substitute_single(enc, i), rule

    if rule == "iii":
        inputs = set(enc.inputs)
        impure = [c for c in q_sets(enc)[i]
                  if any(abs(l) in inputs and l != -x for l in c)]
        c = impure[0]
        if len(c) != 2 or any(l > 0 for l in c):
            raise NotPrime(f"impure clause {fmt_clause(c)} is not of the form ¬x_i ∨ ¬x_j")
        (other,) = c - {-x}
        j_var = -other
        psi = _assign_zero(enc, i)
        if not cnf.is_prime(psi.formula, limit):
            psi = psi.with_formula(cnf.prime_reduce(psi.formula, limit))
        j = psi.inputs.index(j_var) + 1
        return _substitute_single(psi, j), rule

    # rule (iv): Q_i = {¬x_i ∨ y, ¬x_i ∨ z_1 ∨ ... ∨ z_l}
    qi = q_sets(enc)[i]
    short = [c for c in qi if len(c) == 2]
    long_ = [c for c in qi if len(c) > 2]
    if len(short) != 1 or len(long_) != 1:
        raise NotPrime(f"Q_{i} has no binary clause next to the long one")
    (y,) = short[0] - {-x}
    zs = long_[0] - {-x}
    closed = closure_set(enc.formula, [x])
    if closed is None or any(-z in closed for z in zs):
        raise NotPrime(f"x{x} propagates the negation of a literal of {fmt_clause(long_[0])}")
    c3 = frozenset({-y} | zs)
    if any(-l in c3 for l in c3):
        raise NotPrime("replacement clause would be tautological")
    psi = enc.with_formula((enc.formula - {long_[0]}) | {c3})
    return _substitute_single(psi, i), rule


@dataclass
class Normalization:
    encoding: Encoding
    trace: list[str] = field(default_factory=list)
    steps: list[dict] = field(default_factory=list)

    @property
    def regular(self) -> bool:
        return self.encoding.n >= 1 and is_regular(self.encoding)


def normalize_to_regular(enc: Encoding, limit: int = cnf.DEFAULT_LIMIT) -> Normalization:
    """Prime-reduce and apply reduction steps until regular form or n < 4."""
    cur = enc.with_formula(cnf.prime_reduce(enc.formula, limit))
    result = Normalization(cur)
    while cur.n >= 4 and not check_regular(cur).regular:
        before = (len(cur), cur.n)
        cur, rule = reduce_step(cur, check_prime=False, limit=limit)
        cur = cur.with_formula(cnf.prime_reduce(cur.formula, limit))
        result.trace.append(rule)
        result.steps.append({"rule": rule, "size_before": before[0], "n_before": before[1],
                             "size_after": len(cur), "n_after": cur.n})
    result.encoding = cur
    return result


# -- implication graph --------------------------------------------------------

@dataclass
class ImplicationGraph:
    digraph: nx.DiGraph
    aux_graph: Optional[nx.Graph] = None
    components: Optional[list[frozenset]] = None
    pb_graph: Optional[nx.Graph] = None

    def arcs(self) -> set[tuple[int, int]]:
        return set(self.digraph.edges)

    def is_skew_symmetric(self) -> bool:
        return all(self.digraph.has_edge(-h, -g) for g, h in self.digraph.edges)

    def has_path(self, src: int, dst: int) -> bool:
        return (src in self.digraph and dst in self.digraph
                and nx.has_path(self.digraph, src, dst))


def implication_graph(source, regular_report: Optional[StructureReport] = None) -> ImplicationGraph:
    """Arcs ``¬g → h`` and ``¬h → g`` for every clause ``g ∨ h``.

    ``source`` may be a formula or an Encoding; with an Encoding the graph
    of auxiliary-only clauses and, in regular form, the PB graph are added.
    """
    enc = source if isinstance(source, Encoding) else None
    formula = enc.formula if enc else frozenset(source)
    if not cnf.is_2cnf(formula):
        raise NotTwoCNF("implication graphs need a 2-CNF formula")
    dg = nx.DiGraph()
    for v in sorted(cnf.variables(formula)):
        dg.add_nodes_from((v, -v))
    for c in cnf.sorted_formula(formula):
        lits = sorted_clause(c)
        if len(lits) == 1:
            dg.add_edge(-lits[0], lits[0])
        elif len(lits) == 2:
            g, h = lits
            dg.add_edge(-g, h)
            dg.add_edge(-h, g)
    graph = ImplicationGraph(dg)
    if enc is None:
        return graph
    aux = sorted(enc.occurring_auxiliaries())
    ag = nx.Graph()
    ag.add_nodes_from(aux)
    for c in formula:
        vs = {abs(l) for l in c}
        if len(c) == 2 and vs <= enc.auxiliaries:
            ag.add_edge(*sorted(vs))
    graph.aux_graph = ag
    graph.components = sorted((frozenset(k) for k in nx.connected_components(ag)), key=min)
    if regular_report is None:
        try:
            regular_report = check_regular(enc)
        except NotAPEncoding:
            regular_report = None
    if regular_report is not None and regular_report.regular:
        pb = nx.Graph()
        for i, vs in regular_report.pb.items():
            pb.add_edge(*sorted(vs), input=i)
        graph.pb_graph = pb
    return graph


def input_chain(graph: ImplicationGraph, enc: Encoding, i: int, j: int) -> Optional[list[int]]:
    """A path ``x_i → ... → ¬x_j`` whose interior vertices are auxiliary literals."""
    src, dst = enc.inputs[i - 1], -enc.inputs[j - 1]
    allowed = {l for l in graph.digraph if abs(l) in enc.auxiliaries} | {src, dst}
    sub = graph.digraph.subgraph(allowed)
    try:
        return nx.shortest_path(sub, src, dst)
    except (nx.NetworkXNoPath, nx.NodeNotFound):
        return None


def analyze_2cnf(enc: Encoding) -> dict:
    """Diagnostics for a regular-form 2-CNF p-encoding.

    Reports positive input occurrences, inputs with equal PB sets, PB
    triangles, the triangle-free (Mantel) vertex count, the auxiliary-only
    clause components and the matching size recurrence.
    """
    if not cnf.is_2cnf(enc.formula):
        raise NotTwoCNF("analysis needs a 2-CNF encoding")
    report = check_regular(enc)
    if not report.regular:
        raise NotRegular("analysis needs an encoding in regular form")
    n = enc.n
    inputs = set(enc.inputs)
    graph = implication_graph(enc, report)
    pa, pb = report.pa, report.pb

    positive = [sorted_clause(c) for c in enc.clauses() if any(l > 0 and l in inputs for l in c)]

    equal = []
    for r, s in combinations(range(1, n + 1), 2):
        if pb[r] == pb[s]:
            pattern = pa[s] == frozenset(-l for l in pa[r])
            equal.append({"pair": [r, s], "PA_r": _lits(pa[r]), "PA_s": _lits(pa[s]),
                          "pattern": pattern})

    triangles = []
    for r, s, t in combinations(range(1, n + 1), 3):
        if len({pb[r], pb[s], pb[t]}) == 3 and len(pb[r] | pb[s] | pb[t]) == 3:
            triangles.append([r, s, t])

    pb_vertices = graph.pb_graph.number_of_nodes()
    aux_total = len(enc.occurring_auxiliaries())
    aux_only = sum(1 for c in enc.formula if all(abs(l) in enc.auxiliaries for l in c))
    mantel = {
        "applicable": not equal and not triangles,
        "aux_total": aux_total,
        "pb_vertices": pb_vertices,
        "pb_edges": graph.pb_graph.number_of_edges(),
        "two_sqrt_n": 2 * math.sqrt(n),
        "holds": 4 * n <= pb_vertices * pb_vertices,
        "tight": 4 * n == pb_vertices * pb_vertices,
        "pb_triangle_free": sum(nx.triangles(graph.pb_graph).values()) == 0,
    }

    if equal and any(e["pattern"] for e in equal):
        branch = {"case": "equal-pb", "recurrence": "pencQS(n-2) + 7",
                  "bound": lower_bound_2cnf(n - 2) + 7 if n - 2 >= 2 else None}
    elif triangles:
        branch = {"case": "triangle", "recurrence": "pencQS(n-2) + 6",
                  "bound": lower_bound_2cnf(n - 2) + 6 if n - 2 >= 2 else None}
    elif equal:
        branch = {"case": "equal-pb-unmatched", "recurrence": None, "bound": None}
    else:
        branch = {"case": "restricted-regular", "recurrence": "2n + 2 sqrt(n) - 3",
                  "bound": lower_bound_2cnf_sqrt_branch(n)}
    return {
        "n": n,
        "size": len(enc),
        "positive_input_occurrences": positive,
        "equal_pb_pairs": equal,
        "triangles": triangles,
        "mantel": mantel,
        "aux_components": len(graph.components),
        "aux_only_clauses": aux_only,
        "branch": branch,
    }
