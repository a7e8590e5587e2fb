import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gedcmt.lsap import hungarian_duals, solve_lsap
from oracles import brute_lsap


def test_one_by_one():
    assert solve_lsap([[0]]) == ([0], 0)


def test_two_by_two():
    assert solve_lsap([[1, 2], [2, 1]]) == ([0, 1], 2)


def test_zero_diagonal_gives_identity():
    n = 6
    m = [[0 if i == j else 1 + (i * 7 + j) % 5 for j in range(n)] for i in range(n)]
    assert solve_lsap(m) == (list(range(n)), 0)


def test_empty_matrix():
    assert solve_lsap([]) == ([], 0)


def test_ties_resolve_to_smallest_assignment():
    # every permutation costs 3; the identity is lexicographically first
    assert solve_lsap([[1] * 3] * 3) == ([0, 1, 2], 3)
    # optima (1,2,0), (2,0,1) and (2,1,0) all cost 3
    assert solve_lsap([[5, 1, 1], [1, 1, 1], [1, 1, 5]]) == ([1, 2, 0], 3)


def test_fractions_and_floats():
    a, total = solve_lsap([[Fraction(1, 3), Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 3)]])
    assert a == [0, 1] and total == Fraction(2, 3)
    a, total = solve_lsap([[0.5, 2.0], [1.0, 0.25]])
    assert total == Fraction(3, 4)


@pytest.mark.parametrize(
    "matrix, error",
    [
        ([[1, 2]], ValueError),
        ([[1, -1], [0, 0]], ValueError),
        ([[float("inf"), 0], [0, 0]], ValueError),
        ([["a"]], TypeError),
    ],
)
def test_rejects_bad_input(matrix, error):
    with pytest.raises(error):
        solve_lsap(matrix)


square = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 9), min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=150, deadline=None)
@given(square)
def test_matches_brute_force(m):
    assignment, total = solve_lsap(m)
    n = len(m)
    assert sorted(assignment) == list(range(n))
    assert total == sum(m[i][assignment[i]] for i in range(n)) == brute_lsap(m)
    best = [p for p in itertools.permutations(range(n)) if sum(m[i][p[i]] for i in range(n)) == total]
    assert tuple(assignment) == min(best)


@settings(max_examples=100, deadline=None)
@given(square)
def test_dual_certificate(m):
    assignment, u, v = hungarian_duals(m)
    n = len(m)
    opt = sum(m[i][assignment[i]] for i in range(n))
    assert sum(u) + sum(v) == opt
    assert all(m[i][j] - u[i] - v[j] >= 0 for i in range(n) for j in range(n))
