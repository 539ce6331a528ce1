from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from g3super.linalg import Span, nullspace, rank, rank_of_vectors

matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), max_size=6))


def sparse(rows):
    return [{j: Fraction(v) for j, v in enumerate(r) if v} for r in rows]


def test_nullspace_small():
    rows = sparse([[1, 2, 3], [2, 4, 6]])
    ns = nullspace(rows, range(3))
    assert len(ns) == 2
    for v in ns:
        assert sum(Fraction(c) * v.get(j, 0) for j, c in enumerate([1, 2, 3])) == 0


def test_rank_with_large_entries():
    # entries beyond the modular prime still get the exact rank
    big = 10 ** 30
    rows = sparse([[big, 1], [1, Fraction(1, big)]])
    assert rank(rows, range(2)) == 1


def test_span_coordinates():
    sp = Span()
    assert sp.add({"a": 1, "b": 1}, "u")
    assert sp.add({"b": 1}, "v")
    assert not sp.add({"a": 2, "b": 5})
    assert sp.coordinates({"a": 2, "b": 5}) == {"u": 2, "v": 3}
    assert sp.coordinates({"c": 1}) is None
    assert rank_of_vectors([{"a": 1}, {"a": 2}, {"b": 1}]) == 2


@settings(max_examples=120, deadline=None)
@given(matrices)
def test_rank_matches_sympy(rows):
    n = len(rows[0]) if rows else 1
    want = sympy.Matrix(rows).rank() if rows else 0
    assert rank(sparse(rows), range(n)) == want


@settings(max_examples=120, deadline=None)
@given(matrices)
def test_nullspace_vectors_are_killed_and_independent(rows):
    n = len(rows[0]) if rows else 1
    ns = nullspace(sparse(rows), range(n))
    for v in ns:
        for r in rows:
            assert sum(r[j] * v.get(j, 0) for j in range(n)) == 0
    assert rank_of_vectors(ns) == len(ns)
