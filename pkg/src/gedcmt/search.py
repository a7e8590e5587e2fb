"""Index-free range search: the filter-verify baseline and the exact linear scan."""

from __future__ import annotations

import time
from typing import Iterable

from .metric import MetricSpec
from .stats import QueryStats


def filter_verify_scan(db: Iterable, q, r, metric: MetricSpec) -> tuple[frozenset, QueryStats]:
    """Bound every item; reject on the lower bound, accept on the upper, verify the rest."""
    if r < 0:
        raise ValueError(f"radius must be non-negative, got {r}")
    stats = QueryStats()
    started = time.perf_counter()
    answers = set()
    for g in db:
        stats.nodes_visited += 1
        lower, upper = metric.bounds(q, g, stats)
        if lower > r:
            continue
        if upper <= r or metric.within(q, g, r, stats):
            answers.add(g.id)
    stats.wall_time = time.perf_counter() - started
    return frozenset(answers), stats


def linear_distances(db: Iterable, q, metric: MetricSpec, stats: QueryStats | None = None) -> dict:
    """Exact distance from ``q`` to every item."""
    return {g.id: metric.exact(q, g, stats) for g in db}


def linear_oracle(db: Iterable, q, r, metric: MetricSpec, stats: QueryStats | None = None) -> frozenset:
    """Ground truth ``{g : exact(q, g) <= r}``, one exact distance per item."""
    if r < 0:
        raise ValueError(f"radius must be non-negative, got {r}")
    return frozenset(gid for gid, d in linear_distances(db, q, metric, stats).items() if d <= r)
