"""Generators and verifiers for propagation complete AMO / EO encodings."""

__version__ = "0.1.0"

from .cnf import (
    BOTTOM,
    Encoding,
    assign,
    dp_eliminate,
    is_implicate,
    is_prime,
    make_clause,
    make_formula,
    prime_reduce,
    resolve,
    substitute,
    unit_implicates,
)
from .dimacs import parse_dimacs, read_dimacs, serialize_dimacs, write_dimacs
from .encodings import EncodingKind, generate
from .propagation import derives, up_closure
from .verify import (
    FunctionSpec,
    PCReport,
    check_p_conditions,
    classify,
    encoded_function,
    is_encoding_of,
    is_full_pc,
    is_input_pc,
)

__all__ = [
    "BOTTOM", "Encoding", "EncodingKind", "FunctionSpec", "PCReport",
    "assign", "check_p_conditions", "classify", "derives", "dp_eliminate",
    "encoded_function", "generate", "is_encoding_of", "is_full_pc", "is_implicate",
    "is_input_pc", "is_prime", "make_clause", "make_formula", "parse_dimacs",
    "prime_reduce", "read_dimacs", "resolve", "serialize_dimacs", "substitute",
    "unit_implicates", "up_closure", "write_dimacs",
]
