import pytest

from amopc.cnf import Encoding, make_formula
from amopc.dimacs import (
    InvalidHeader,
    ParseError,
    UndeclaredVariable,
    parse_dimacs,
    read_dimacs,
    serialize_dimacs,
    write_dimacs,
)
from amopc.encodings import KINDS, EncodingKind, generate, sequential_amo


def test_default_inputs():
    enc = parse_dimacs("p cnf 2 1\n-1 -2 0\n")
    assert enc.inputs == (1, 2)
    assert enc.auxiliaries == frozenset()


def test_serialize_header():
    text = serialize_dimacs(sequential_amo(4))
    assert text.startswith("c inputs 1 2 3 4\np cnf 5 6")


def test_duplicate_literal_collapses():
    enc = parse_dimacs("p cnf 1 1\n1 1 0\n")
    assert enc.formula == make_formula([[1]])


def test_inputs_lines_union_and_multiline_clause():
    enc = parse_dimacs("c inputs 1\nc inputs 2 1\np cnf 3 1\n-1\n 3 0\n")
    assert enc.inputs == (1, 2)
    assert enc.auxiliaries == {3}
    assert enc.formula == make_formula([[-1, 3]])


@pytest.mark.parametrize("text, err", [
    ("-1 0\n", ParseError),
    ("p cnf 2\n", InvalidHeader),
    ("p cnf 2 2\n1 0\n", InvalidHeader),
    ("p cnf 2 1\n1 3 0\n", UndeclaredVariable),
    ("p cnf 2 1\n1 x 0\n", ParseError),
    ("p cnf 2 1\n1 -1 0\n", ParseError),
    ("p cnf 2 1\n1 2\n", ParseError),
    ("", InvalidHeader),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_dimacs(text)


def test_error_carries_line_number():
    with pytest.raises(ParseError) as info:
        parse_dimacs("c hi\np cnf 2 1\n1 y 0\n")
    assert info.value.line == 3


@pytest.mark.parametrize("tag", KINDS)
def test_round_trip(tag):
    n = 8
    kind = EncodingKind(tag, n, (2, 2, 2, 2) if tag == "partition-fixture" else None)
    enc = generate(kind)
    again = parse_dimacs(serialize_dimacs(enc))
    assert again == enc
    assert serialize_dimacs(again) == serialize_dimacs(enc)


def test_renumbering_on_serialize():
    enc = Encoding(make_formula([[-7, 9], [-3, -9]]), (7, 3), {9})
    back = parse_dimacs(serialize_dimacs(enc))
    assert back.inputs == (1, 2)
    assert back.formula == make_formula([[-1, 3], [-2, -3]])


def test_file_io(tmp_path):
    path = tmp_path / "s.cnf"
    write_dimacs(path, sequential_amo(6), ["hello"])
    assert "c hello" in path.read_text()
    assert read_dimacs(path) == sequential_amo(6)
