"""Exact linear sum assignment on rational cost matrices."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Sequence

_INF = float("inf")


def hungarian(cost: Sequence[Sequence[int]]) -> list[int]:
    """Minimum-cost perfect matching for a square matrix of exact numbers.

    Shortest augmenting path with row/column potentials, O(n^3). Returns
    ``assignment`` with ``assignment[row] = column``.
    """
    return hungarian_duals(cost)[0]


def hungarian_duals(cost: Sequence[Sequence[int]]) -> tuple[list[int], list, list]:
    """Like :func:`hungarian` but also returns the final potentials.

    ``row_pot[i] + col_pot[j] <= cost[i][j]`` everywhere, with equality on
    the assignment, so ``cost[i][j] - row_pot[i] - col_pot[j]`` is the extra
    cost of forcing row ``i`` onto column ``j``.
    """
    n = len(cost)
    if n == 0:
        return [], [], []
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)  # p[col] = row matched to col, 1-based, 0 = free
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [_INF] * (n + 1)
        free = list(range(1, n + 1))
        visited = [0]
        while True:
            i0 = p[j0]
            row = cost[i0 - 1]
            ui0 = u[i0]
            delta = _INF
            j1 = 0
            for j in free:
                cur = row[j - 1] - ui0 - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                    if cur < delta:
                        delta = cur
                        j1 = j
                elif minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in visited:
                u[p[j]] += delta
                v[j] -= delta
            for j in free:
                minv[j] -= delta
            j0 = j1
            free.remove(j0)
            visited.append(j0)
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    assignment = [0] * n
    for j in range(1, n + 1):
        assignment[p[j] - 1] = j - 1
    return assignment, u[1:], v[1:]


def solve_lsap_int(costs: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Integer LSAP with lexicographically smallest optimal assignment.

    Each entry is lifted to ``c * n**n + col * n**(n-1-row)``. The added
    terms encode the assignment as a base-``n`` number, so among assignments
    of equal cost the smallest in lexicographic order wins, and since the
    encoding is below ``n**n`` it never overrides a real cost difference.
    """
    n = len(costs)
    if n == 0:
        return [], 0
    big = n**n
    weights = [n ** (n - 1 - r) for r in range(n)]
    lifted = [[c * big + col * w for col, c in enumerate(row)] for row, w in zip(costs, weights)]
    assignment = hungarian(lifted)
    total = sum(costs[r][c] for r, c in enumerate(assignment))
    return assignment, total


def solve_lsap(costs: Sequence[Sequence]) -> tuple[list[int], Fraction]:
    """Solve a square LSAP exactly over rationals.

    Returns the lexicographically smallest optimal assignment
    (``assignment[row] = column``) and its total cost.
    """
    n = len(costs)
    rows = [list(r) for r in costs]
    if any(len(r) != n for r in rows):
        raise ValueError("cost matrix must be square")
    denom = 1
    for r in rows:
        for c in r:
            if isinstance(c, float):
                if not math.isfinite(c):
                    raise ValueError("cost matrix entries must be finite")
            elif not isinstance(c, Rational):
                raise TypeError(f"unsupported cost entry {c!r}")
            if c < 0:
                raise ValueError("cost matrix entries must be non-negative")
    exact = [[Fraction(c) for c in r] for r in rows]
    for r in exact:
        for c in r:
            denom = math.lcm(denom, c.denominator)
    scaled = [[int(c * denom) for c in r] for r in exact]
    assignment, total = solve_lsap_int(scaled)
    return assignment, Fraction(total, denom)
