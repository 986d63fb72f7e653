import itertools
import random

import pytest

from amopc import cnf
from amopc.cnf import (
    BOTTOM,
    Encoding,
    InvalidEncoding,
    NotResolvable,
    Tautological,
    TooLarge,
    Unsatisfiable,
    assign,
    dp_eliminate,
    fmt_clause,
    is_implicate,
    is_prime,
    make_clause,
    make_formula,
    models,
    prime_reduce,
    resolve,
    substitute,
    unit_implicates,
    variables,
)
from amopc.encodings import pairwise_amo, prime_exone, product_amo, sequential_amo

from conftest import random_formula


def table(formula, order):
    order, ms = models(formula, order)
    return set(ms.tolist())


def test_make_clause():
    assert len(make_clause([-1, -2])) == 2
    assert make_clause([1, 1]) == frozenset({1})
    with pytest.raises(Tautological):
        make_clause([1, -1])
    with pytest.raises(ValueError):
        make_clause([0])


def test_resolve_examples():
    assert resolve(frozenset({-1, 3}), frozenset({-3, -2})) == frozenset({-1, -2})
    with pytest.raises(NotResolvable):
        resolve(frozenset({1, 3}), frozenset({-1, -3}))
    with pytest.raises(NotResolvable):
        resolve(frozenset({1}), frozenset({2}))
    assert resolve(frozenset({1}), frozenset({-1})) == BOTTOM


def test_substitute_examples():
    assert substitute(make_formula([[-1, 3]]), 3, 1) == frozenset()
    assert substitute(make_formula([[-1, 3], [-3, -2]]), 3, 1) == make_formula([[-1, -2]])
    fixture = make_formula([[-1, 4], [-4, -2], [-4, -3], [-2, -3]])
    assert substitute(fixture, 4, 1) == pairwise_amo(3).formula
    with pytest.raises(ValueError):
        substitute(fixture, 4, -4)


def test_substitute_negative_literal_and_collapse():
    phi = make_formula([[-1, -5], [5, 2], [-1, 2]])
    # -5 -> 1 means 5 -> -1: (-1 v 1) dropped, (-1 v 2) twice collapses
    assert substitute(phi, -5, 1) == make_formula([[-1, 2]])


def test_assign_examples():
    assert assign(pairwise_amo(4).formula, [-4]) == pairwise_amo(3).formula
    assert assign(make_formula([[-1, -2]]), [1, 2]) == frozenset({BOTTOM})
    phi = sequential_amo(5).formula
    assert assign(phi, []) == phi
    with pytest.raises(ValueError):
        assign(phi, [1, -1])


def test_dp_eliminate_examples():
    assert dp_eliminate(sequential_amo(4).formula, 5) == pairwise_amo(4).formula
    assert dp_eliminate(make_formula([[3, 1], [-3, 1]]), 3) == make_formula([[1]])
    phi = make_formula([[3, 1], [3, -2], [1, 2]])
    assert dp_eliminate(phi, 3) == make_formula([[1, 2]])
    with pytest.raises(ValueError):
        dp_eliminate(phi, 9)


def test_is_implicate_examples():
    p3 = pairwise_amo(3).formula
    assert is_implicate(p3, [-1, -2])
    assert not is_implicate(p3, [-1])
    assert is_implicate(prime_exone(3).formula, [1, 2, 3])
    with pytest.raises(TooLarge):
        is_implicate(pairwise_amo(30).formula, [-1, -2])


def test_prime_reduce_examples():
    p3 = pairwise_amo(3).formula
    assert prime_reduce(p3) == p3
    phi = make_formula([[-1, -2], [-1, -3], [-1, -2, -3]])
    assert prime_reduce(phi) == make_formula([[-1, -2], [-1, -3]])
    assert prime_reduce(make_formula([[1, 2], [1]])) == make_formula([[1]])
    with pytest.raises(Unsatisfiable):
        prime_reduce(make_formula([[1], [-1]]))


def test_prime_reduce_tie_break_is_canonical():
    # both (x1) and (x2) are implicates inside (x1 v x2 v x3); the first in clause order wins
    phi = make_formula([[1], [2], [1, 2, 3]])
    assert prime_reduce(phi) == make_formula([[1], [2]])


def test_is_prime_and_unit_implicates():
    assert is_prime(product_amo(25).formula)  # beyond the enumeration limit: exact search
    assert not is_prime(pairwise_amo(3).formula | {frozenset({-1, -2, -3})})
    assert unit_implicates(make_formula([[1], [1, 2]])) == {1}
    assert unit_implicates(sequential_amo(6).formula) == frozenset()


def test_implicate_oracle_agrees_with_search():
    phi = sequential_amo(7).formula
    small = cnf.implicate_oracle(phi, limit=24)
    exact = cnf.implicate_oracle(phi, limit=3)
    for clause in itertools.combinations([-1, -2, -3, 8, -8, 9], 2):
        c = frozenset(clause)
        if any(-l in c for l in c):
            continue
        assert small(c) == exact(c)


def test_models_masks():
    order, ms = models(make_formula([[1, 2]]), [1, 2])
    assert sorted(ms.tolist()) == [1, 2, 3]
    order, ms = models(make_formula([[1], [-1]]))
    assert ms.size == 0
    with pytest.raises(ValueError):
        models(make_formula([[1, 2]]), [1])


def test_models_chunked_matches_bruteforce():
    rng = random.Random(5)
    phi = random_formula(rng, 20, 12, 4)
    order, ms = models(phi, range(1, 21))
    sat = set(ms.tolist())
    for a in rng.sample(range(1 << 20), 2000):
        ok = all(any(((a >> (abs(l) - 1)) & 1) == (l > 0) for l in c) for c in phi)
        assert ok == (a in sat)


def test_fmt_clause():
    assert fmt_clause([2, -1]) == "(¬x1 ∨ x2)"
    assert fmt_clause(BOTTOM) == "⊥"


def test_encoding_validation():
    with pytest.raises(InvalidEncoding):
        Encoding(make_formula([[1, 2]]), ())
    with pytest.raises(InvalidEncoding):
        Encoding(make_formula([[1, 2]]), (1,))
    with pytest.raises(InvalidEncoding):
        Encoding(make_formula([[1, 2]]), (1, 2), {2})
    with pytest.raises(InvalidEncoding):
        Encoding(make_formula([[1, 2]]), (1, 1, 2))
    enc = Encoding(make_formula([[1, 5]]), (1,), {5})
    assert enc.compact().formula == make_formula([[1, 2]])


# properties


def test_resolvent_is_implicate(rng):
    for _ in range(300):
        a = random_formula(rng, 6, 1, 4)
        b = random_formula(rng, 6, 1, 4)
        (c1,), (c2,) = a, b
        try:
            r = resolve(c1, c2)
        except NotResolvable:
            continue
        assert is_implicate({c1, c2}, r)


def test_assign_composes(rng):
    for _ in range(200):
        phi = random_formula(rng, 7, 10)
        vs = rng.sample(range(1, 8), 4)
        r1 = [v if rng.random() < 0.5 else -v for v in vs[:2]]
        r2 = [v if rng.random() < 0.5 else -v for v in vs[2:]]
        assert assign(phi, r1 + r2) == assign(assign(phi, r1), r2)


def test_dp_eliminate_preserves_projection(rng):
    for _ in range(200):
        phi = random_formula(rng, 7, 9)
        vs = sorted(variables(phi))
        y = rng.choice(vs)
        rest = [v for v in vs if v != y]
        after = dp_eliminate(phi, y)
        _, ms = models(phi, rest + [y])
        projected = set((ms & ((1 << len(rest)) - 1)).tolist())
        assert projected == table(after, rest)


def test_prime_reduce_preserves_function(rng):
    for _ in range(150):
        phi = random_formula(rng, 6, 8)
        order = sorted(variables(phi))
        if not table(phi, order):
            continue
        red = prime_reduce(phi)
        assert len(red) <= len(phi)
        assert table(red, order) == table(phi, order)
        assert is_prime(red)
