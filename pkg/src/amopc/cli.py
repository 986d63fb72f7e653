"""Command line interface: ``amopc <command> ...``.

Exit codes: 0 on success or a true verdict, 1 on a false verdict (or an
empty search), 2 on usage and input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional

from . import __version__, cnf
from .bounds import CSV_COLUMNS, InvalidN, bounds_row, bounds_table, lower_bound_2cnf, lower_bound_general
from .dimacs import ParseError, read_dimacs, serialize_dimacs, write_dimacs
from .encodings import AMO_FAMILY, KINDS, TWO_CNF, EncodingKind, InvalidParameters, generate
from .propagation import render_trace, up_closure
from .search import SearchError, SearchSpec, find_minimum
from . import structure, verify

BENCH_PC_CAP = 9


class UsageError(Exception):
    pass


def _envelope(command: str, args: argparse.Namespace, result: dict, code: int) -> dict:
    config = {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items())
              if k not in ("func", "command")}
    return {
        "tool": "amopc",
        "schema_version": 1,
        "version": __version__,
        "command": command,
        "config": config,
        "seed": args.seed,
        "exit_code": code,
        "result": result,
    }


def _emit_json(command, args, result, code, out) -> int:
    out.write(json.dumps(_envelope(command, args, result, code), indent=2, default=_jsonable) + "\n")
    return code


def _jsonable(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj, key=cnf.lit_key)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# -- generate ---------------------------------------------------------------

def cmd_generate(args, out) -> int:
    blocks = None
    if args.blocks:
        try:
            blocks = tuple(int(b) for b in args.blocks.split(","))
        except ValueError:
            raise UsageError("--blocks expects four comma-separated integers") from None
    n = args.n if args.n is not None else (sum(blocks) if blocks else None)
    if n is None:
        raise UsageError("--n is required")
    kind = EncodingKind(args.kind, n, blocks, args.inner)
    enc = generate(kind)
    comments = [f"kind {args.kind} n {n}"]
    if args.out:
        write_dimacs(args.out, enc, comments)
    if args.json:
        result = {"kind": args.kind, "n": n, "clauses": len(enc),
                  "auxiliaries": len(enc.occurring_auxiliaries()),
                  "out": str(args.out) if args.out else None}
        return _emit_json("generate", args, result, 0, out)
    if not args.out:
        out.write(serialize_dimacs(enc, comments))
    else:
        out.write(f"wrote {args.out}: {len(enc)} clauses, n={n}\n")
    return 0


# -- verify -------------------------------------------------------------------

def cmd_verify(args, out) -> int:
    enc = read_dimacs(args.file)
    mode = args.mode
    if mode == "full-pc":
        rep = verify.is_full_pc(enc.formula)
    elif mode == "prime":
        rep = verify.prime_report(enc, args.limit)
    elif mode == "p":
        rep = verify.check_p_conditions(enc)
    else:
        try:
            f = verify.function_for(args.function, enc, args.limit)
        except verify.NotAnAMOorEO as exc:
            rep = verify.PCReport(False, {"reason": str(exc)}, 1, mode)
            f = None
        if f is not None:
            if mode == "enc":
                ok = verify.is_encoding_of(enc, f, args.limit)
                rep = verify.PCReport(ok, None if ok else {"function": f.kind}, 1 << enc.n, "enc",
                                      {"function": f.kind})
            elif not verify.is_encoding_of(enc, f, args.limit):
                rep = verify.PCReport(False, {"reason": f"not an encoding of {f.kind}"}, 0, mode,
                                      {"function": f.kind})
            else:
                rep = verify.is_input_pc(enc, f, fast=args.fast)
                rep.details["function"] = f.kind
    result = rep.to_dict()
    if args.trace and rep.witness and "assumptions" in rep.witness:
        outcome = up_closure(enc.formula, rep.witness["assumptions"])
        result["trace"] = render_trace(outcome).splitlines()
    code = 0 if rep.verdict else 1
    return _emit_json("verify", args, result, code, out)


# -- analyze ------------------------------------------------------------------

def _analysis(enc) -> dict:
    p = verify.check_p_conditions(enc)
    result = {"n": enc.n, "size": len(enc), "p_encoding": p.verdict,
              "q_sizes": structure.q_sets(enc).sizes(),
              "sparse_auxiliaries": verify.sparse_auxiliaries(enc)}
    if not p.verdict:
        result["p_witness"] = p.witness
        return result
    report = structure.check_regular(enc, verify=False)
    if report.regular:
        structure.star_analysis(enc, report)
    result["structure"] = report.to_dict()
    if cnf.is_2cnf(enc.formula):
        if report.regular:
            diag = structure.analyze_2cnf(enc)
            diag["positive_input_occurrences"] = len(diag["positive_input_occurrences"])
            result["two_cnf"] = diag
        else:
            result["two_cnf"] = {"branch": {"case": "non-regular", "recurrence": "pencQS(n-1) + 3"}}
    return result


def cmd_analyze(args, out) -> int:
    enc = read_dimacs(args.file)
    result = _analysis(enc)
    if args.json:
        return _emit_json("analyze", args, result, 0, out)
    out.write(f"n={result['n']} size={result['size']} p-encoding={result['p_encoding']}\n")
    out.write(f"|Q_i|: {result['q_sizes']}\n")
    if "structure" in result:
        st = result["structure"]
        out.write(f"regular: {st['regular']}\n")
        for cond, verdicts in st["conditions"].items():
            bad = [i + 1 for i, ok in enumerate(verdicts) if not ok]
            out.write(f"  {cond}: {'ok' if not bad else 'fails at ' + str(bad)}\n")
        if st["regular"]:
            out.write(f"type-Q {st['type_q']}  type-R {st['type_r']}\n")
            out.write(f"star checks: {st['star']['checks']}\n")
    if "two_cnf" in result:
        out.write(f"2-CNF: {json.dumps(result['two_cnf'])}\n")
    for a in result["sparse_auxiliaries"]:
        out.write(f"advisory: x{a['variable']} occurs {a['occurrences']} times, {a['advisory']}\n")
    return 0


# -- reduce -------------------------------------------------------------------

def cmd_reduce(args, out) -> int:
    enc = read_dimacs(args.file)
    if not verify.check_p_conditions(enc).verdict:
        raise UsageError("input is not a p-encoding")
    norm = structure.normalize_to_regular(enc, args.limit)
    final = norm.encoding
    write_dimacs(args.out, final, ["reduced by normalize_to_regular"])
    trace_path = Path(str(args.out) + ".trace")
    trace_path.write_text("".join(f"{t}\n" for t in norm.trace))
    result = {"input_size": len(enc), "input_n": enc.n, "output_size": len(final),
              "output_n": final.n, "regular": norm.regular, "trace": norm.trace,
              "steps": norm.steps, "out": str(args.out), "trace_file": str(trace_path)}
    if args.json:
        return _emit_json("reduce", args, result, 0, out)
    out.write(f"{len(enc)} clauses / n={enc.n} -> {len(final)} clauses / n={final.n}; "
              f"rules: {' '.join(norm.trace) or '(none)'}\n")
    return 0


# -- bounds and bench ---------------------------------------------------------

def _write_csv(rows: list[dict], columns, out) -> None:
    w = csv.DictWriter(out, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in columns})


def _range(args):
    if args.n_from < 3 or args.n_to < args.n_from:
        raise UsageError("need 3 <= --from <= --to")
    return args.n_from, args.n_to


def cmd_bounds(args, out) -> int:
    a, b = _range(args)
    rows = [r.as_dict() for r in bounds_table(a, b)]
    if args.csv:
        _write_csv(rows, CSV_COLUMNS, out)
        return 0
    return _emit_json("bounds", args, {"rows": rows}, 0, out)


BENCH_COLUMNS = ("n", "lb_general", "lb_2cnf", "regular_floor_ceil", "size_pairwise",
                 "size_sequential", "size_tree", "size_product", "ok", "pc")


def cmd_bench(args, out) -> int:
    a, b = _range(args)
    rows, violations = [], []
    for n in range(a, b + 1):
        row = bounds_row(n).as_dict()
        sizes = {}
        for tag in AMO_FAMILY:
            enc = generate(EncodingKind(tag, n))
            sizes[tag] = len(enc)
            if len(enc) < lower_bound_general(n) or (tag in TWO_CNF and len(enc) < lower_bound_2cnf(n)):
                violations.append({"n": n, "kind": tag, "size": len(enc)})
        row.update(size_pairwise=sizes["pairwise-amo"], size_sequential=sizes["sequential-amo"],
                   size_tree=sizes["tree-amo"], size_product=sizes["product-amo"])
        row["ok"] = not any(v["n"] == n for v in violations)
        if args.verify_pc:
            if n <= BENCH_PC_CAP:
                f = verify.FunctionSpec.amo(n)
                row["pc"] = all(verify.is_input_pc(generate(EncodingKind(tag, n)), f).verdict
                                for tag in AMO_FAMILY)
            else:
                row["pc"] = "skipped (cap)"
        else:
            row["pc"] = "not run"
        rows.append(row)
    code = 0 if not violations and all(r["pc"] is not False for r in rows) else 1
    if args.csv:
        _write_csv(rows, BENCH_COLUMNS, out)
        return code
    return _emit_json("bench", args, {"rows": rows, "violations": violations}, code, out)


# -- search -------------------------------------------------------------------

def cmd_search(args, out) -> int:
    f = verify.FunctionSpec(args.function.upper(), args.n)
    job = SearchSpec(args.n, f, args.max_size, args.require, args.unsafe_no_aux)
    res = find_minimum(job)
    code = 0 if res.found else 1
    if args.json:
        return _emit_json("search", args, res.to_dict(), code, out)
    if res.found:
        out.write(f"size {res.size}\n")
        out.write(serialize_dimacs(res.witness))
    else:
        out.write(f"none within budget {args.max_size}\n")
    out.write(f"nodes explored {res.nodes_explored}\n")
    if not res.certified:
        out.write("note: not a minimality certificate\n")
    return code


# -- parser -------------------------------------------------------------------

def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="recorded in JSON reports")
    common.add_argument("--limit", type=_positive, default=cnf.DEFAULT_LIMIT,
                        help="enumeration limit on variables")

    p = argparse.ArgumentParser(prog="amopc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"amopc {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write an encoding as DIMACS")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--n", type=_positive)
    g.add_argument("--blocks", help="four block sizes for partition-fixture, e.g. 2,2,2,2")
    g.add_argument("--inner", choices=AMO_FAMILY, default="sequential-amo")
    g.add_argument("--out", type=Path)
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", parents=[common], help="check an encoding")
    v.add_argument("file", type=Path)
    v.add_argument("--function", choices=("amo", "eo", "auto"), default="auto")
    v.add_argument("--mode", choices=("enc", "p", "input-pc", "full-pc", "prime"), default="input-pc")
    v.add_argument("--fast", action="store_true", help="restricted assumption families (AMO/EO only)")
    v.add_argument("--trace", action="store_true", help="include the propagation trace of the witness")
    v.add_argument("--json", action="store_true", help="accepted for symmetry; output is always JSON")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", parents=[common], help="regular form and 2-CNF diagnostics")
    a.add_argument("file", type=Path)
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("reduce", parents=[common], help="normalize a p-encoding towards regular form")
    r.add_argument("file", type=Path)
    r.add_argument("--out", type=Path, required=True)
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_reduce)

    for name, func, hlp in (("bounds", cmd_bounds, "lower bound table"),
                            ("bench", cmd_bench, "generated sizes against the bounds")):
        b = sub.add_parser(name, parents=[common], help=hlp)
        b.add_argument("--from", dest="n_from", type=int, required=True)
        b.add_argument("--to", dest="n_to", type=int, required=True)
        fmt = b.add_mutually_exclusive_group()
        fmt.add_argument("--csv", action="store_true")
        fmt.add_argument("--json", action="store_true")
        if name == "bench":
            b.add_argument("--verify-pc", action="store_true",
                           help=f"exhaustive input-PC check for n <= {BENCH_PC_CAP}")
        b.set_defaults(func=func)

    s = sub.add_parser("search", parents=[common], help="minimum auxiliary-free encodings for tiny n")
    s.add_argument("--function", choices=("amo", "eo"), required=True)
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--require", choices=("enc", "p", "input-pc"), default="input-pc")
    s.add_argument("--max-size", type=_positive, default=4)
    s.add_argument("--unsafe-no-aux", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_search)
    return p


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, ParseError, InvalidParameters, InvalidN, SearchError,
            cnf.TooLarge, cnf.CNFError, structure.StructureError, OSError) as exc:
        print(f"amopc {args.command}: {exc}", file=sys.stderr)
        return 2


def run(argv: list[str]) -> tuple[int, str]:
    """Run the CLI in-process and capture standard output."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
