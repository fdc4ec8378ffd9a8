from fractions import Fraction

from hypothesis import given, settings, strategies as st

from liepoint.linalg import in_span, nullspace, rank, rref, solve

entries = st.fractions(min_value=-5, max_value=5, max_denominator=4)
matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(entries, min_size=n, max_size=n), min_size=1, max_size=5))


def _rows(M):
    return [{j: v for j, v in enumerate(r) if v} for r in M]


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_nullspace_is_annihilated_and_complete(M):
    n = len(M[0])
    ns = nullspace(_rows(M), n)
    for v in ns:
        for r in M:
            assert sum(a * b for a, b in zip(r, v)) == 0
    assert len(ns) + rank(_rows(M), n) == n


def test_rref_example():
    rows, cols = rref([{0: 2, 1: 4}, {0: 1, 1: 3}], 2)
    assert cols == [0, 1]
    assert rows == [{0: Fraction(1)}, {1: Fraction(1)}]


def test_solve_and_span():
    cols = [[1, 0, 1], [0, 1, 1]]
    assert solve(cols, [2, 3, 5]) == [2, 3]
    assert solve(cols, [1, 1, 0]) is None
    assert in_span(cols, [Fraction(1, 2), 0, Fraction(1, 2)])
