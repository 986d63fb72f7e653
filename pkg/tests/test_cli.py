import csv
import io
import json
from importlib import resources

import jsonschema
import pytest

from amopc.cli import run
from amopc.dimacs import read_dimacs

SCHEMA = json.loads(resources.files("amopc").joinpath("schemas/report.schema.json").read_text())


def report(argv):
    code, text = run(argv)
    doc = json.loads(text)
    jsonschema.validate(doc, SCHEMA)
    assert doc["exit_code"] == code
    return code, doc


def test_generate_writes_dimacs(tmp_path):
    out = tmp_path / "p25.cnf"
    code, doc = report(["generate", "--kind", "product-amo", "--n", "25", "--out", str(out), "--json"])
    assert code == 0 and doc["result"]["clauses"] == 68
    enc = read_dimacs(out)
    assert enc.n == 25 and len(enc) == 68


def test_generate_to_stdout():
    code, text = run(["generate", "--kind", "sequential-amo", "--n", "5"])
    assert code == 0
    assert "p cnf 7 9" in text


def test_generate_partition_fixture(tmp_path):
    out = tmp_path / "fx.cnf"
    code, _ = run(["generate", "--kind", "partition-fixture", "--blocks", "2,2,2,2", "--out", str(out)])
    assert code == 0 and len(read_dimacs(out)) == 41


def test_verify_true_and_false(tmp_path):
    good = tmp_path / "seq.cnf"
    bad = tmp_path / "nonpc.cnf"
    run(["generate", "--kind", "sequential-amo", "--n", "6", "--out", str(good)])
    run(["generate", "--kind", "nonpc-exone", "--n", "5", "--out", str(bad)])
    code, doc = report(["verify", str(good), "--function", "amo"])
    assert code == 0 and doc["result"]["verdict"] is True
    code, doc = report(["verify", str(bad), "--function", "eo", "--trace"])
    assert code == 1
    w = doc["result"]["witness"]
    assert w["assumptions"] == [-1, -2, -3, -4] and w["literal"] == 5
    assert doc["result"]["trace"] == []  # nothing fires, which is the point


def test_verify_rejects_wrong_function(tmp_path):
    path = tmp_path / "eo.cnf"
    run(["generate", "--kind", "nonpc-exone", "--n", "4", "--out", str(path)])
    code, doc = report(["verify", str(path), "--function", "amo"])
    assert code == 1 and "not an encoding" in doc["result"]["witness"]["reason"]


def test_verify_trace_lines(tmp_path):
    path = tmp_path / "f.cnf"
    path.write_text("c inputs 1 2 3 4\np cnf 4 3\n-1 2 0\n-2 3 4 0\n-2 3 -4 0\n")
    code, doc = report(["verify", str(path), "--mode", "full-pc", "--trace"])
    assert code == 1
    assert doc["result"]["trace"][0].endswith("-> x2")


@pytest.mark.parametrize("mode", ["enc", "p", "full-pc", "prime"])
def test_verify_modes(tmp_path, mode):
    path = tmp_path / "seq.cnf"
    run(["generate", "--kind", "sequential-amo", "--n", "5", "--out", str(path)])
    code, doc = report(["verify", str(path), "--mode", mode])
    assert code == 0 and doc["result"]["mode"] == mode


def test_verify_bad_input(tmp_path):
    path = tmp_path / "broken.cnf"
    path.write_text("p cnf 2 1\n1 x 0\n")
    code, _ = run(["verify", str(path)])
    assert code == 2
    code, _ = run(["verify", str(tmp_path / "missing.cnf")])
    assert code == 2


def test_analyze(tmp_path):
    path = tmp_path / "p25.cnf"
    run(["generate", "--kind", "product-amo", "--n", "25", "--out", str(path)])
    code, doc = report(["analyze", str(path), "--json"])
    assert code == 0
    assert doc["result"]["structure"]["regular"] is True
    assert doc["result"]["two_cnf"]["mantel"]["pb_vertices"] == 10
    code, text = run(["analyze", str(path)])
    assert code == 0 and "regular: True" in text


def test_reduce_writes_trace(tmp_path):
    src = tmp_path / "pw.cnf"
    dst = tmp_path / "pw.reduced.cnf"
    run(["generate", "--kind", "pairwise-amo", "--n", "6", "--out", str(src)])
    code, doc = report(["reduce", str(src), "--out", str(dst), "--json"])
    assert code == 0
    assert (tmp_path / "pw.reduced.cnf.trace").read_text().split() == doc["result"]["trace"]
    assert read_dimacs(dst).n == doc["result"]["output_n"]


def test_reduce_rejects_non_p_encoding(tmp_path):
    src = tmp_path / "x.cnf"
    src.write_text("c inputs 1 2\np cnf 3 2\n-1 3 0\n-2 3 0\n")
    code, _ = run(["reduce", str(src), "--out", str(tmp_path / "y.cnf")])
    assert code == 2


def test_bounds_csv_and_json():
    code, text = run(["bounds", "--from", "3", "--to", "12", "--csv"])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and len(rows) == 10 and rows[0]["n"] == "3"
    code, doc = report(["bounds", "--from", "9", "--to", "10", "--json"])
    assert [r["lb_2cnf"] for r in doc["result"]["rows"]] == [21, 24]


def test_bench_sizes_above_bounds():
    code, text = run(["bench", "--from", "3", "--to", "64", "--csv"])
    assert code == 0
    for r in csv.DictReader(io.StringIO(text)):
        lb = int(r["lb_general"])
        for col in ("size_pairwise", "size_sequential", "size_tree", "size_product"):
            assert int(r[col]) >= lb
        assert r["ok"] == "True"


def test_bench_verify_pc_cap():
    code, doc = report(["bench", "--from", "8", "--to", "10", "--verify-pc", "--json"])
    assert code == 0
    assert [r["pc"] for r in doc["result"]["rows"]] == [True, True, "skipped (cap)"]


def test_search(tmp_path):
    code, doc = report(["search", "--function", "eo", "--n", "3", "--json"])
    assert code == 0 and doc["result"]["size"] == 4 and doc["result"]["certified"]
    code, doc = report(["search", "--function", "amo", "--n", "3", "--max-size", "2", "--json"])
    assert code == 1 and not doc["result"]["found"]
    code, _ = run(["search", "--function", "amo", "--n", "3", "--max-size", "6"])
    assert code == 2


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["bounds", "--from", "2", "--to", "5"],
    ["bounds", "--from", "9", "--to", "5"],
    ["generate", "--kind", "product-amo"],
    ["generate", "--kind", "partition-fixture", "--blocks", "1,x"],
    ["search", "--function", "amo", "--n", "5"],
])
def test_usage_errors_exit_2(argv):
    code, _ = run(argv)
    assert code == 2


def test_envelope_records_config():
    _, doc = report(["bounds", "--from", "3", "--to", "3", "--json", "--seed", "11"])
    assert doc["seed"] == 11 and doc["config"]["n_from"] == 3
    assert doc["tool"] == "amopc" and doc["command"] == "bounds"
