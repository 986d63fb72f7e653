"""Extended DIMACS: the standard CNF format plus ``c inputs`` comment lines."""

from __future__ import annotations

from .cnf import CNFError, Encoding, lit_key, make_clause, rename, sorted_formula


class ParseError(CNFError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class InvalidHeader(ParseError):
    pass


class UndeclaredVariable(ParseError):
    pass


def parse_dimacs(text: str) -> Encoding:
    """Parse extended DIMACS text into an Encoding.

    Without any ``c inputs`` line every declared variable is an input.
    """
    nvars = nclauses = None
    inputs: list[int] = []
    clauses = []
    pending: list[int] = []
    pending_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) >= 2 and parts[0] == "c" and parts[1] == "inputs":
                try:
                    for tok in parts[2:]:
                        v = int(tok)
                        if v <= 0:
                            raise ValueError
                        if v not in inputs:
                            inputs.append(v)
                except ValueError:
                    raise ParseError(f"bad inputs line {raw!r}", lineno) from None
            continue
        if line.startswith("p"):
            parts = line.split()
            if nvars is not None:
                raise InvalidHeader("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise InvalidHeader(f"expected 'p cnf V C', got {raw!r}", lineno)
            try:
                nvars, nclauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise InvalidHeader(f"non-integer header {raw!r}", lineno) from None
            if nvars < 0 or nclauses < 0:
                raise InvalidHeader("negative counts in header", lineno)
            continue
        if nvars is None:
            raise ParseError("clause before problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno) from None
            if abs(lit) > nvars:
                raise UndeclaredVariable(f"variable {abs(lit)} exceeds declared {nvars}", lineno)
            if lit == 0:
                try:
                    clauses.append(make_clause(pending))
                except CNFError as exc:
                    raise ParseError(str(exc), pending_line or lineno) from None
                pending = []
                pending_line = None
            else:
                if not pending:
                    pending_line = lineno
                pending.append(lit)
    if nvars is None:
        raise InvalidHeader("missing problem line")
    if pending:
        raise ParseError("last clause is not terminated by 0", pending_line)
    if len(clauses) != nclauses:
        raise InvalidHeader(f"header declares {nclauses} clauses, found {len(clauses)}")
    if any(v > nvars for v in inputs):
        raise UndeclaredVariable(f"input exceeds declared variable count {nvars}")
    if not inputs:
        inputs = list(range(1, nvars + 1))
    aux = set(range(1, nvars + 1)) - set(inputs)
    return Encoding(frozenset(clauses), tuple(inputs), frozenset(aux))


def serialize_dimacs(enc: Encoding, comments: list[str] | None = None) -> str:
    """Write ``enc`` renumbered to inputs 1..n and auxiliaries n+1..V.

    Declared auxiliaries keep their relative order, so a parsed file
    serializes back to itself.  Duplicate clauses collapse (set semantics).
    """
    order = enc.inputs + tuple(sorted(enc.auxiliaries))
    mapping = {v: i + 1 for i, v in enumerate(order)}
    formula = rename(enc.formula, mapping)
    lines = ["c inputs " + " ".join(str(i) for i in range(1, enc.n + 1))]
    for c in comments or ():
        lines.append(f"c {c}")
    lines.append(f"p cnf {len(order)} {len(formula)}")
    for clause in sorted_formula(formula):
        lines.append(" ".join(str(l) for l in sorted(clause, key=lit_key)) + " 0")
    return "\n".join(lines) + "\n"


def read_dimacs(path) -> Encoding:
    with open(path) as fh:
        return parse_dimacs(fh.read())


def write_dimacs(path, enc: Encoding, comments: list[str] | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(serialize_dimacs(enc, comments))
