"""Pluggable distances for the search structures.

A metric space supplies an exact distance, a cheap certified interval
around it, and an exact threshold test. Every call takes an optional
:class:`QueryStats` that it charges.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .bounds import BoundConfig, DistanceInterval, pair_bounds
from .costs import CostModel
from .exact import DEFAULT_MAX_NODES, SearchCounter, exact_ged, ged_within
from .graph import LabeledGraph
from .stats import QueryStats

# Euclidean distances are floats; tree pruning widens comparisons by this much
EUCLIDEAN_TOLERANCE = 1e-9


class MetricSpec:
    """Base class for a metric over items carrying an ``id`` attribute."""

    name: str = "abstract"
    #: slack used when a cascaded float bound is compared against a radius
    tolerance: float = 0.0
    #: how distances are written to index files: "fraction" or "float"
    number_type: str = "fraction"

    def exact(self, a, b, stats: QueryStats | None = None):
        raise NotImplementedError

    def bounds(self, a, b, stats: QueryStats | None = None) -> DistanceInterval:
        raise NotImplementedError

    def within(self, a, b, radius, stats: QueryStats | None = None) -> bool:
        """Exact test ``exact(a, b) <= radius``, charged as a verification."""
        if stats is not None:
            stats.verify_calls += 1
        return self.exact(a, b) <= radius

    def item_id(self, item) -> str:
        return item.id

    def encode_item(self, item) -> str:
        raise NotImplementedError

    def checksum(self, items: Sequence[Any]) -> str:
        h = hashlib.sha256()
        for item in items:
            h.update(self.encode_item(item).encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()

    def describe(self) -> str:
        return self.name


class GedMetric(MetricSpec):
    """Graph edit distance with assignment-based bounds."""

    number_type = "fraction"

    def __init__(
        self,
        cost: CostModel = CostModel(),
        config: BoundConfig = BoundConfig(),
        max_nodes: int = DEFAULT_MAX_NODES,
    ):
        if not cost.is_metric:
            raise ValueError(
                "GED is only a metric when insertion and deletion costs match; "
                f"got {cost} (node_ins,node_del,node_sub,edge_ins,edge_del,edge_sub)"
            )
        self.cost = cost
        self.config = config
        self.max_nodes = max_nodes
        self.name = f"ged[{cost}]"

    def _counter(self, stats):
        return SearchCounter() if stats is not None else None

    def _charge(self, stats, counter):
        if stats is not None:
            stats.lsap_calls += counter.lsap_calls
            stats.mappings_expanded += counter.expanded

    def exact(self, a: LabeledGraph, b: LabeledGraph, stats: QueryStats | None = None) -> Fraction:
        counter = self._counter(stats)
        d, _ = exact_ged(a, b, self.cost, max_nodes=self.max_nodes, counter=counter)
        if stats is not None:
            stats.exact_calls += 1
            self._charge(stats, counter)
        return d

    def bounds(self, a: LabeledGraph, b: LabeledGraph, stats: QueryStats | None = None) -> DistanceInterval:
        if stats is not None:
            stats.bound_calls += 1
            stats.lsap_calls += 2
        return pair_bounds(a, b, self.cost, self.config)

    def within(self, a: LabeledGraph, b: LabeledGraph, radius, stats: QueryStats | None = None) -> bool:
        counter = self._counter(stats)
        ok = ged_within(a, b, radius, self.cost, max_nodes=self.max_nodes, counter=counter)
        if stats is not None:
            stats.verify_calls += 1
            self._charge(stats, counter)
        return ok

    def encode_item(self, item: LabeledGraph) -> str:
        return item.to_json()

    def describe(self) -> str:
        return f"{self.name} refine_iterations={self.config.refine_iterations}"


def ged_metric(cost: CostModel = CostModel(), config: BoundConfig = BoundConfig(), **kwargs) -> GedMetric:
    return GedMetric(cost, config, **kwargs)


@dataclass(frozen=True)
class EuclideanPoint:
    id: str
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))


class EuclideanMetric(MetricSpec):
    """Euclidean distance with optional artificial fuzz on the bounds.

    ``bounds`` returns ``[max(0, d - fuzz), d + fuzz]``; a positive fuzz
    makes the tree produce suspected items and exercise verification.
    """

    number_type = "float"
    tolerance = EUCLIDEAN_TOLERANCE

    def __init__(self, dimension: int, fuzz=0):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        if fuzz < 0:
            raise ValueError("fuzz must be non-negative")
        self.dimension = dimension
        self.fuzz = fuzz
        self.name = f"euclidean[d={dimension},fuzz={fuzz}]"

    def _check(self, a: EuclideanPoint, b: EuclideanPoint) -> None:
        if len(a.coords) != self.dimension or len(b.coords) != self.dimension:
            raise ValueError(
                f"dimension mismatch: expected {self.dimension}, got {len(a.coords)} and {len(b.coords)}"
            )

    def exact(self, a: EuclideanPoint, b: EuclideanPoint, stats: QueryStats | None = None) -> float:
        self._check(a, b)
        if stats is not None:
            stats.exact_calls += 1
        return math.dist(a.coords, b.coords)

    def bounds(self, a: EuclideanPoint, b: EuclideanPoint, stats: QueryStats | None = None) -> DistanceInterval:
        self._check(a, b)
        if stats is not None:
            stats.bound_calls += 1
        d = math.dist(a.coords, b.coords)
        if not self.fuzz:
            return DistanceInterval(d, d)
        return DistanceInterval(max(0.0, d - self.fuzz), d + self.fuzz)

    def encode_item(self, item: EuclideanPoint) -> str:
        coords = [float(c).hex() if isinstance(c, float) else str(Fraction(c)) for c in item.coords]
        return json.dumps([item.id, coords], separators=(",", ":"))


def euclidean_metric(dimension: int, fuzz=0) -> EuclideanMetric:
    return EuclideanMetric(dimension, fuzz)
