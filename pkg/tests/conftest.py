import random

import pytest

from amopc.cnf import assign, make_formula


def random_formula(rng: random.Random, nvars: int, nclauses: int, max_len: int = 3):
    clauses = []
    for _ in range(nclauses):
        k = rng.randint(1, max_len)
        vs = rng.sample(range(1, nvars + 1), min(k, nvars))
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return make_formula(clauses)


@pytest.fixture
def rng():
    return random.Random(20240611)


# -- prime p-encodings for the reduction suites --------------------------------

from amopc.cnf import Encoding, prime_reduce, rename  # noqa: E402
from amopc.encodings import (  # noqa: E402
    amo_wrap,
    exone_wrap,
    nonpc_exone,
    pairwise_amo,
    partition_fixture,
    prime_exone,
    product_amo,
    sequential_amo,
    tree_amo,
)

RULE_I_FIXTURE = Encoding(make_formula([[-1, 4], [-4, -2], [-4, -3], [-2, -3]]), (1, 2, 3), {4})

# Q_1 = {(¬x1 ∨ y), (¬x1 ∨ z1 ∨ z2)} with y=5, z1=6, z2=7, w=8
RULE_IV_FIXTURE = Encoding(make_formula([
    [-1, 5], [-1, 6, 7], [-2, -5], [-2, 6], [-3, -5], [-3, 7], [-4, -5], [-4, 8],
    [-6, -7], [-8, -6], [-8, -7],
]), (1, 2, 3, 4), {5, 6, 7, 8})

# PB_1 = PB_2 = PB_3 = {a, b} with a=4, b=5
EQUAL_PB_FIXTURE = Encoding(make_formula([
    [-1, 4], [-1, 5], [-2, -4], [-2, -5], [-3, 4], [-3, -5],
]), (1, 2, 3), {4, 5})


def base_encodings():
    out = [RULE_I_FIXTURE, RULE_IV_FIXTURE]
    for n in range(4, 9):
        out += [sequential_amo(n), tree_amo(n), pairwise_amo(n), product_amo(n),
                amo_wrap(n), exone_wrap(n), nonpc_exone(n), prime_exone(n),
                amo_wrap(n, "tree-amo"), exone_wrap(n, "pairwise-amo")]
    for blocks in [(1, 1, 1, 1), (2, 1, 1, 2), (2, 2, 2, 2), (1, 2, 2, 1)]:
        out.append(partition_fixture(blocks))
    return out


def mutate(rng: random.Random, enc: Encoding) -> Encoding:
    """Input permutation, auxiliary polarity flips and renaming, optional zero-fixing."""
    inputs = list(enc.inputs)
    rng.shuffle(inputs)
    aux = sorted(enc.occurring_auxiliaries())
    fresh = rng.sample(range(50, 90), len(aux))
    mapping = dict(zip(aux, fresh))
    flips = {v for v in fresh if rng.random() < 0.5}
    formula = rename(enc.formula, mapping)
    formula = frozenset(frozenset(-l if abs(l) in flips else l for l in c) for c in formula)
    out = Encoding(formula, inputs, set(fresh))
    if out.n > 4 and rng.random() < 0.4:
        k = rng.randint(1, out.n - 4)
        zeros = rng.sample(list(out.inputs), k)
        rest = [x for x in out.inputs if x not in zeros]
        out = Encoding(assign(out.formula, [-z for z in zeros]), rest, out.auxiliaries | set(zeros))
    return out.with_formula(prime_reduce(out.formula))


# -- acceptance summary ---------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
