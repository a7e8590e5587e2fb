"""Brute-force references used to derive and cross-check expected values.

These deliberately share no code with the package beyond the graph and
cost-model containers: edit costs are priced from first principles and
every injective partial node mapping is enumerated.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def edit_cost(g1, g2, phi, cost) -> Fraction:
    """Cost of the edit path induced by ``phi`` (source index -> target index or None)."""
    total = Fraction(0)
    used = set()
    for u, label in enumerate(g1.node_labels):
        j = phi[u]
        if j is None:
            total += cost.node_del
        else:
            used.add(j)
            if g2.node_labels[j] != label:
                total += cost.node_sub
    total += cost.node_ins * (g2.node_count - len(used))
    e2 = {frozenset((a, b)): lab for a, b, lab in g2.edges}
    covered = set()
    for u, v, label in g1.edges:
        if phi[u] is None or phi[v] is None:
            total += cost.edge_del
            continue
        key = frozenset((phi[u], phi[v]))
        if key in e2:
            covered.add(key)
            if e2[key] != label:
                total += cost.edge_sub
        else:
            total += cost.edge_del
    total += cost.edge_ins * (len(e2) - len(covered))
    return total


def all_mappings(n1: int, n2: int):
    for k in range(min(n1, n2) + 1):
        for src in itertools.combinations(range(n1), k):
            for tgt in itertools.permutations(range(n2), k):
                phi = [None] * n1
                for a, b in zip(src, tgt):
                    phi[a] = b
                yield phi


def brute_ged(g1, g2, cost) -> Fraction:
    return min(edit_cost(g1, g2, phi, cost) for phi in all_mappings(g1.node_count, g2.node_count))


def brute_lsap(matrix) -> Fraction:
    n = len(matrix)
    return min(sum((matrix[i][p[i]] for i in range(n)), Fraction(0)) for p in itertools.permutations(range(n)))
