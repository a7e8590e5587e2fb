"""Edit-operation costs, node mappings and their induced edit cost."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .graph import LabeledGraph

COST_FIELDS = ("node_ins", "node_del", "node_sub", "edge_ins", "edge_del", "edge_sub")


@dataclass(frozen=True)
class CostModel:
    """Six non-negative edit costs. Defaults to the unit model."""

    node_ins: Fraction = Fraction(1)
    node_del: Fraction = Fraction(1)
    node_sub: Fraction = Fraction(1)
    edge_ins: Fraction = Fraction(1)
    edge_del: Fraction = Fraction(1)
    edge_sub: Fraction = Fraction(1)

    def __post_init__(self):
        for name in COST_FIELDS:
            value = getattr(self, name)
            if isinstance(value, float) and not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            value = Fraction(value)
            if value < 0:
                raise ValueError(f"{name} must be non-negative, got {value}")
            object.__setattr__(self, name, value)
        if self.node_sub > self.node_ins + self.node_del:
            raise ValueError("node_sub must not exceed node_ins + node_del")
        if self.edge_sub > self.edge_ins + self.edge_del:
            raise ValueError("edge_sub must not exceed edge_ins + edge_del")

    @classmethod
    def parse(cls, text: str) -> "CostModel":
        """Build from six comma-separated values in field order, e.g. ``"1,1,1,1,1,1"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 6:
            raise ValueError(f"cost model needs 6 values ({','.join(COST_FIELDS)}), got {len(parts)}")
        return cls(*(Fraction(p) for p in parts))

    def as_tuple(self) -> tuple[Fraction, ...]:
        return tuple(getattr(self, name) for name in COST_FIELDS)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.as_tuple())

    @property
    def is_metric(self) -> bool:
        return self.node_ins == self.node_del and self.edge_ins == self.edge_del

    @property
    def scale(self) -> int:
        """Common denominator: every cost times ``scale`` is an integer."""
        return math.lcm(*(c.denominator for c in self.as_tuple()))

    def scaled(self) -> "IntCosts":
        s = self.scale
        return IntCosts(*(int(c * s) for c in self.as_tuple()), scale=s)


@dataclass(frozen=True)
class IntCosts:
    """A :class:`CostModel` multiplied through by its common denominator."""

    node_ins: int
    node_del: int
    node_sub: int
    edge_ins: int
    edge_del: int
    edge_sub: int
    scale: int = 1


def multiset_cost(a: Mapping[str, int], b: Mapping[str, int], sub, ins, dele):
    """Cheapest way to turn label multiset ``a`` into ``b`` ignoring structure.

    Matched pairs cost nothing when labels agree and ``sub`` otherwise; the
    surplus on one side is deleted (``a`` larger) or inserted (``b`` larger).
    Requires ``sub <= ins + dele``.
    """
    na = sum(a.values())
    nb = sum(b.values())
    common = 0
    for label, count in a.items():
        other = b.get(label)
        if other:
            common += count if count < other else other
    paired = na if na < nb else nb
    cost = sub * (paired - common)
    if na > nb:
        cost += dele * (na - nb)
    else:
        cost += ins * (nb - na)
    return cost


@dataclass(frozen=True)
class EditMapping:
    """Witness edit path: where each node of the source graph goes.

    ``node_map[i]`` is the target node for source node ``i`` or ``None`` for
    a deletion. Target nodes that nobody maps to are insertions.
    """

    node_map: tuple[int | None, ...]
    target_size: int

    @property
    def inserted(self) -> tuple[int, ...]:
        used = {j for j in self.node_map if j is not None}
        return tuple(j for j in range(self.target_size) if j not in used)

    def check(self, n1: int, n2: int) -> None:
        if len(self.node_map) != n1 or self.target_size != n2:
            raise ValueError("mapping does not match graph sizes")
        targets = [j for j in self.node_map if j is not None]
        if len(set(targets)) != len(targets):
            raise ValueError("mapping is not injective")
        if any(j < 0 or j >= n2 for j in targets):
            raise ValueError("mapping target out of range")


def induced_cost_int(g1: LabeledGraph, g2: LabeledGraph, node_map: Sequence[int | None], ic: IntCosts) -> int:
    """Scaled-integer cost of the edit path induced by ``node_map``."""
    labels1, labels2 = g1.node_labels, g2.node_labels
    cost = 0
    used = 0
    for i, j in enumerate(node_map):
        if j is None:
            cost += ic.node_del
        else:
            used += 1
            if labels1[i] != labels2[j]:
                cost += ic.node_sub
    cost += ic.node_ins * (len(labels2) - used)

    adj2 = g2.adjacency
    matched = 0
    for u, v, label in g1.edges:
        a, b = node_map[u], node_map[v]
        other = None if a is None or b is None else adj2[a].get(b)
        if other is None:
            cost += ic.edge_del
        else:
            matched += 1
            if other != label:
                cost += ic.edge_sub
    cost += ic.edge_ins * (len(g2.edges) - matched)
    return cost


def induced_cost(g1: LabeledGraph, g2: LabeledGraph, mapping: EditMapping, cost: CostModel) -> Fraction:
    """Exact cost of the edit path a mapping induces."""
    mapping.check(g1.node_count, g2.node_count)
    ic = cost.scaled()
    return Fraction(induced_cost_int(g1, g2, mapping.node_map, ic), ic.scale)
