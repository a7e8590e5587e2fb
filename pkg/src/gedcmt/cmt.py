"""Cascading metric tree.

Every node picks a pivot from its items and stores, for each pivot on the
path from the root down to itself, the [min, max] exact distance from the
pivot to the items below. A range query turns per-pivot bounds for the
query into bounds for whole subtrees, so a subtree can be dropped or
accepted wholesale; leaves resolve members individually into confirmed
and suspected sets. Suspected members are checked exactly afterwards.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Sequence

from .metric import MetricSpec
from .stats import COUNTER_FIELDS, QueryStats

FORMAT_VERSION = 1
_INF = float("inf")


class IndexFormatError(ValueError):
    """Malformed or inconsistent index document."""


class IndexVersionError(IndexFormatError):
    pass


class IndexChecksumError(IndexFormatError):
    """Index does not belong to the supplied item collection."""


@dataclass(frozen=True)
class CmtConfig:
    branching: int = 2
    leaf_capacity: int = 8
    pivot_seed: int = 0

    def __post_init__(self):
        if self.branching < 2:
            raise ValueError("branching must be >= 2")
        if self.leaf_capacity < 1:
            raise ValueError("leaf_capacity must be >= 1")


@dataclass
class CmtNode:
    pivot: int
    intervals: tuple  # ((lo, hi), ...) for each pivot on the root path, own last
    children: tuple = ()
    members: tuple = ()  # leaf: item indices
    member_dists: tuple = ()  # leaf: per member, exact distance to each path pivot
    size: int = 0

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def item_indices(self):
        if self.is_leaf:
            yield from self.members
        else:
            for child in self.children:
                yield from child.item_indices()


@dataclass
class CmtTree:
    items: tuple
    metric_name: str
    config: CmtConfig
    root: CmtNode
    build_stats: QueryStats = field(default_factory=QueryStats)

    def __post_init__(self):
        self.index_of = {}
        for i, item in enumerate(self.items):
            key = item.id
            if key in self.index_of:
                raise ValueError(f"duplicate item id {key!r}")
            self.index_of[key] = i

    def nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def depth(self) -> int:
        def walk(node):
            return 1 + max((walk(c) for c in node.children), default=0)

        return walk(self.root)


def _split(ordered: list, parts: int) -> list[list]:
    parts = min(parts, len(ordered))
    q, extra = divmod(len(ordered), parts)
    groups, start = [], 0
    for k in range(parts):
        end = start + q + (1 if k < extra else 0)
        groups.append(ordered[start:end])
        start = end
    return groups


def build(items: Sequence[Any], metric: MetricSpec, config: CmtConfig = CmtConfig()) -> CmtTree:
    """Build a tree over ``items`` using exact distances only.

    Deterministic given the item order and ``config``.
    """
    items = tuple(items)
    if not items:
        raise ValueError("cannot build a tree over an empty collection")
    stats = QueryStats()
    started = time.perf_counter()
    rng = random.Random(config.pivot_seed)

    def make(idxs: list[int], dists: dict[int, list]) -> CmtNode:
        stats.nodes_visited += 1
        pivot = idxs[rng.randrange(len(idxs))]
        own = {}
        for i in idxs:
            own[i] = 0 if i == pivot else metric.exact(items[pivot], items[i], stats)
            dists[i].append(own[i])
        depth = len(dists[pivot])
        intervals = tuple(
            (min(dists[i][k] for i in idxs), max(dists[i][k] for i in idxs)) for k in range(depth)
        )
        if len(idxs) <= config.leaf_capacity:
            return CmtNode(
                pivot,
                intervals,
                members=tuple(idxs),
                member_dists=tuple(tuple(dists[i]) for i in idxs),
                size=len(idxs),
            )
        ordered = sorted(idxs, key=lambda i: (own[i], i))
        children = []
        for group in _split(ordered, config.branching):
            children.append(make(group, {i: list(dists[i]) for i in group}))
        return CmtNode(pivot, intervals, children=tuple(children), size=len(idxs))

    root = make(list(range(len(items))), {i: [] for i in range(len(items))})
    stats.wall_time = time.perf_counter() - started
    return CmtTree(items, metric.name, config, root, stats)


@dataclass(frozen=True)
class QueryResult:
    query_id: str
    radius: Any
    metric_name: str
    confirmed: frozenset
    suspected: frozenset
    answers: frozenset
    stats: QueryStats
    suspected_items: tuple = field(default=(), compare=False, repr=False)


def _check_radius(r) -> None:
    if r < 0:
        raise ValueError(f"radius must be non-negative, got {r}")


def range_query(tree: CmtTree, q, r, metric: MetricSpec) -> QueryResult:
    """Classify indexed items into confirmed / suspected for ``d(q, .) <= r``.

    ``answers`` equals ``confirmed``; run :func:`verify_suspected` to settle
    the suspected items.
    """
    _check_radius(r)
    if metric.name != tree.metric_name:
        raise ValueError(f"tree was built with {tree.metric_name}, query uses {metric.name}")
    stats = QueryStats()
    started = time.perf_counter()
    items = tree.items
    tol = metric.tolerance
    accept_at = r - tol
    reject_above = r + tol
    cache: dict[int, tuple] = {}
    confirmed: list[int] = []
    suspected: list[int] = []

    def pivot_bounds(p: int) -> tuple:
        hit = cache.get(p)
        if hit is None:
            iv = metric.bounds(q, items[p], stats)
            hit = cache[p] = (iv.lower, iv.upper)
        return hit

    def cascade(path, intervals, lo, hi):
        for (lq, uq), (ls, us) in zip(path, intervals):
            lo = max(lo, lq - us, ls - uq)
            hi = min(hi, uq + us)
        return lo, hi

    def settle(node: CmtNode, lo, hi) -> bool:
        if lo > reject_above:
            stats.subtrees_pruned += 1
            return True
        if hi <= accept_at:
            stats.subtrees_confirmed += 1
            confirmed.extend(node.item_indices())
            return True
        return False

    def visit(node: CmtNode, path: list) -> None:
        stats.nodes_visited += 1
        # ancestors' bounds are already paid for; try them before the own pivot
        lo, hi = cascade(path, node.intervals, 0, _INF)
        if path and settle(node, lo, hi):
            return
        path = path + [pivot_bounds(node.pivot)]
        lo, hi = cascade(path[-1:], node.intervals[-1:], lo, hi)
        if settle(node, lo, hi):
            return
        if not node.is_leaf:
            for child in node.children:
                visit(child, path)
            return
        for m, ds in zip(node.members, node.member_dists):
            lo, hi = 0, _INF
            for (lq, uq), d in zip(path, ds):
                lo = max(lo, lq - d, d - uq)
                hi = min(hi, uq + d)
            if hi <= accept_at:
                confirmed.append(m)
                continue
            if lo > reject_above:
                continue
            # the cascade cannot decide; add the direct pair bounds, which
            # involve no arithmetic of ours and so are compared without slack
            dl, du = pivot_bounds(m)
            if du <= r or min(hi, du) <= accept_at:
                confirmed.append(m)
            elif dl > r or max(lo, dl) > reject_above:
                continue
            else:
                suspected.append(m)

    visit(tree.root, [])
    stats.wall_time = time.perf_counter() - started
    confirmed_ids = frozenset(items[i].id for i in confirmed)
    return QueryResult(
        query_id=q.id,
        radius=r,
        metric_name=metric.name,
        confirmed=confirmed_ids,
        suspected=frozenset(items[i].id for i in suspected),
        answers=confirmed_ids,
        stats=stats,
        suspected_items=tuple(items[i] for i in sorted(suspected)),
    )


def verify_suspected(result: QueryResult, q, r, metric: MetricSpec) -> QueryResult:
    """Settle every suspected item with an exact threshold test."""
    if q.id != result.query_id or r != result.radius or metric.name != result.metric_name:
        raise ValueError("verify_suspected called with a different query, radius or metric than the result")
    stats = replace(result.stats)
    started = time.perf_counter()
    kept = {g.id for g in result.suspected_items if metric.within(q, g, r, stats)}
    stats.wall_time += time.perf_counter() - started
    return replace(result, answers=result.confirmed | kept, stats=stats)


def search(tree: CmtTree, q, r, metric: MetricSpec) -> QueryResult:
    """Range query followed by verification."""
    return verify_suspected(range_query(tree, q, r, metric), q, r, metric)


# -- serialization ----------------------------------------------------------


def _enc(x) -> list[int]:
    f = Fraction(x)
    return [f.numerator, f.denominator]


def _dec(pair, number_type: str):
    if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(v, int) for v in pair)) or pair[1] <= 0:
        raise IndexFormatError(f"bad number encoding {pair!r}")
    f = Fraction(pair[0], pair[1])
    return float(f) if number_type == "float" else f


def serialize(tree: CmtTree, metric: MetricSpec) -> str:
    items = tree.items

    def node_doc(node: CmtNode) -> dict:
        doc = {
            "pivot": items[node.pivot].id,
            "intervals": [[_enc(lo), _enc(hi)] for lo, hi in node.intervals],
        }
        if node.is_leaf:
            doc["members"] = [
                [items[m].id, [_enc(d) for d in ds]] for m, ds in zip(node.members, node.member_dists)
            ]
        else:
            doc["children"] = [node_doc(c) for c in node.children]
        return doc

    doc = {
        "format_version": FORMAT_VERSION,
        "metric": tree.metric_name,
        "number_type": metric.number_type,
        "config": {
            "branching": tree.config.branching,
            "leaf_capacity": tree.config.leaf_capacity,
            "pivot_seed": tree.config.pivot_seed,
        },
        "items": {"count": len(items), "checksum": metric.checksum(items)},
        "build_stats": tree.build_stats.counters(),
        "root": node_doc(tree.root),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def deserialize(document: str, items: Sequence[Any], metric: MetricSpec) -> CmtTree:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise IndexFormatError(f"index is not valid JSON: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise IndexFormatError("index document must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise IndexVersionError(f"unsupported index format_version {version!r}; expected {FORMAT_VERSION}")
    try:
        if doc["metric"] != metric.name:
            raise IndexFormatError(f"index built for metric {doc['metric']}, got {metric.name}")
        number_type = doc["number_type"]
        if number_type not in ("fraction", "float"):
            raise IndexFormatError(f"unknown number_type {number_type!r}")
        items = tuple(items)
        info = doc["items"]
        if info["count"] != len(items) or info["checksum"] != metric.checksum(items):
            raise IndexChecksumError("item collection does not match the one the index was built over")
        config = CmtConfig(**doc["config"])
        index_of = {item.id: i for i, item in enumerate(items)}

        def resolve(item_id) -> int:
            try:
                return index_of[item_id]
            except (KeyError, TypeError):
                raise IndexChecksumError(f"index references unknown item id {item_id!r}") from None

        seen = set()

        def load(d: dict, depth: int) -> CmtNode:
            pivot = resolve(d["pivot"])
            intervals = tuple((_dec(lo, number_type), _dec(hi, number_type)) for lo, hi in d["intervals"])
            if len(intervals) != depth:
                raise IndexFormatError("interval table length does not match node depth")
            if "members" in d:
                members, dists = [], []
                for item_id, ds in d["members"]:
                    m = resolve(item_id)
                    if m in seen:
                        raise IndexFormatError(f"item {item_id!r} stored in more than one leaf")
                    seen.add(m)
                    if len(ds) != depth:
                        raise IndexFormatError("member distance row does not match node depth")
                    members.append(m)
                    dists.append(tuple(_dec(x, number_type) for x in ds))
                return CmtNode(pivot, intervals, members=tuple(members), member_dists=tuple(dists), size=len(members))
            children = tuple(load(c, depth + 1) for c in d["children"])
            if not children:
                raise IndexFormatError("internal node without children")
            return CmtNode(pivot, intervals, children=children, size=sum(c.size for c in children))

        root = load(doc["root"], 1)
        if len(seen) != len(items):
            raise IndexFormatError("index does not cover every item exactly once")
        stats = QueryStats(**{k: int(doc["build_stats"][k]) for k in COUNTER_FIELDS})
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, IndexFormatError):
            raise
        raise IndexFormatError(f"malformed index document: {exc}") from None
    return CmtTree(items, metric.name, config, root, stats)
