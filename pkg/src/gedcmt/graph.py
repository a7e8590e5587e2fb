"""Labeled undirected graphs, the JSON-Lines collection format, and seeded generators."""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class GraphFormatError(ValueError):
    """Raised when a collection document cannot be parsed into valid graphs."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class LabeledGraph:
    """Undirected graph with one string label per node and per edge.

    Edges are stored as ``(u, v, label)`` with ``u < v``. The constructor
    does not reject invalid input; call :func:`validate` for that.
    """

    id: str
    node_labels: tuple[str, ...] = ()
    edges: tuple[tuple[int, int, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "node_labels", tuple(self.node_labels))
        canon = []
        for u, v, label in self.edges:
            if u > v:
                u, v = v, u
            canon.append((u, v, label))
        canon.sort()
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def node_count(self) -> int:
        return len(self.node_labels)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[dict[int, str], ...]:
        adj: list[dict[int, str]] = [{} for _ in self.node_labels]
        for u, v, label in self.edges:
            adj[u][v] = label
            adj[v][u] = label
        return tuple(adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    @cached_property
    def node_label_counts(self) -> Counter:
        return Counter(self.node_labels)

    @cached_property
    def edge_label_counts(self) -> Counter:
        return Counter(label for _, _, label in self.edges)

    def to_json(self) -> str:
        doc = {
            "id": self.id,
            "nodes": list(self.node_labels),
            "edges": [[u, v, label] for u, v, label in self.edges],
        }
        return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


def validate(g: LabeledGraph) -> list[str]:
    """Return every invariant violation of ``g``; an empty list means valid."""
    problems = []
    n = g.node_count
    seen = set()
    for u, v, label in g.edges:
        if not isinstance(label, str):
            problems.append(f"edge ({u},{v}) label is not a string")
        if u == v:
            problems.append(f"self-loop at node {u}")
        if u < 0 or v < 0 or u >= n or v >= n:
            problems.append(f"endpoint out of range in edge ({u},{v}) for {n} nodes")
        if (u, v) in seen:
            problems.append(f"duplicate edge ({u},{v})")
        seen.add((u, v))
    for i, label in enumerate(g.node_labels):
        if not isinstance(label, str):
            problems.append(f"node {i} label is not a string")
    return problems


@dataclass(frozen=True)
class GraphCollection:
    graphs: tuple[LabeledGraph, ...]
    source: str = "generated"
    _by_id: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "graphs", tuple(self.graphs))
        by_id = {}
        for g in self.graphs:
            if g.id in by_id:
                raise GraphFormatError(f"duplicate graph id {g.id!r}")
            by_id[g.id] = g
        object.__setattr__(self, "_by_id", by_id)

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)

    def __getitem__(self, i: int) -> LabeledGraph:
        return self.graphs[i]

    def get(self, graph_id: str) -> LabeledGraph:
        try:
            return self._by_id[graph_id]
        except KeyError:
            raise KeyError(f"no graph with id {graph_id!r}") from None


def _parse_line(obj, lineno: int) -> LabeledGraph:
    if not isinstance(obj, dict):
        raise GraphFormatError("expected a JSON object", lineno)
    missing = {"id", "nodes", "edges"} - obj.keys()
    if missing:
        raise GraphFormatError(f"missing field(s) {sorted(missing)}", lineno)
    gid, nodes, edges = obj["id"], obj["nodes"], obj["edges"]
    if not isinstance(gid, str):
        raise GraphFormatError("'id' must be a string", lineno)
    if not isinstance(nodes, list) or not all(isinstance(x, str) for x in nodes):
        raise GraphFormatError("'nodes' must be a list of strings", lineno)
    if not isinstance(edges, list):
        raise GraphFormatError("'edges' must be a list", lineno)
    parsed = []
    for e in edges:
        if (
            not isinstance(e, list)
            or len(e) != 3
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in e[:2])
            or not isinstance(e[2], str)
        ):
            raise GraphFormatError(f"malformed edge {e!r}", lineno)
        parsed.append((e[0], e[1], e[2]))
    g = LabeledGraph(gid, tuple(nodes), tuple(parsed))
    problems = validate(g)
    if problems:
        raise GraphFormatError("; ".join(problems), lineno)
    return g


def parse_collection(text: str, source: str = "<string>") -> GraphCollection:
    """Parse a JSON-Lines collection document.

    A single trailing newline is allowed; any other blank line is an error.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    graphs = []
    ids = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            raise GraphFormatError("blank line", lineno)
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc.msg}", lineno) from None
        g = _parse_line(obj, lineno)
        if g.id in ids:
            raise GraphFormatError(f"duplicate graph id {g.id!r}", lineno)
        ids.add(g.id)
        graphs.append(g)
    return GraphCollection(tuple(graphs), source)


def serialize_collection(collection: Iterable[LabeledGraph]) -> str:
    return "".join(g.to_json() + "\n" for g in collection)


def load_collection(path) -> GraphCollection:
    with open(path, encoding="utf-8") as fh:
        return parse_collection(fh.read(), source=str(path))


def save_collection(collection: Iterable[LabeledGraph], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_collection(collection))


DEFAULT_NODE_ALPHABET = ("C", "N", "O")
DEFAULT_EDGE_ALPHABET = ("1", "2")
# about one edge per node at ten nodes, close to small organic molecules
DEFAULT_EDGE_DENSITY = 0.2


def random_graph(
    seed: int,
    node_count_range: tuple[int, int],
    node_alphabet: Sequence[str] = DEFAULT_NODE_ALPHABET,
    edge_alphabet: Sequence[str] = DEFAULT_EDGE_ALPHABET,
    edge_density: float = DEFAULT_EDGE_DENSITY,
    graph_id: str | None = None,
) -> LabeledGraph:
    lo, hi = node_count_range
    if lo < 0 or hi < lo:
        raise ValueError(f"bad node count range {node_count_range!r}")
    if not node_alphabet or not edge_alphabet:
        raise ValueError("label alphabets must be non-empty")
    if not 0.0 <= edge_density <= 1.0:
        raise ValueError(f"edge density {edge_density} outside [0, 1]")
    rng = random.Random(seed)
    n = rng.randint(lo, hi)
    nodes = tuple(rng.choice(node_alphabet) for _ in range(n))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < edge_density:
                edges.append((u, v, rng.choice(edge_alphabet)))
    return LabeledGraph(graph_id if graph_id is not None else f"seed{seed}", nodes, tuple(edges))


def random_collection(
    seed: int,
    count: int,
    node_count_range: tuple[int, int],
    node_alphabet: Sequence[str] = DEFAULT_NODE_ALPHABET,
    edge_alphabet: Sequence[str] = DEFAULT_EDGE_ALPHABET,
    edge_density: float = DEFAULT_EDGE_DENSITY,
    prefix: str = "g",
) -> GraphCollection:
    rng = random.Random(seed)
    graphs = [
        random_graph(
            rng.getrandbits(63),
            node_count_range,
            node_alphabet,
            edge_alphabet,
            edge_density,
            graph_id=f"{prefix}{i}",
        )
        for i in range(count)
    ]
    return GraphCollection(tuple(graphs), "generated")


def perturb_graph(
    g: LabeledGraph,
    seed: int,
    edits: int,
    node_alphabet: Sequence[str] = DEFAULT_NODE_ALPHABET,
    edge_alphabet: Sequence[str] = DEFAULT_EDGE_ALPHABET,
    graph_id: str | None = None,
) -> LabeledGraph:
    """Apply ``edits`` random unit edit operations to ``g``.

    Used to draw queries that sit near database graphs, so that small
    radii have non-empty answers. The result is at GED <= ``edits`` from
    ``g`` under unit costs.
    """
    rng = random.Random(seed)
    nodes = list(g.node_labels)
    edges = {(u, v): label for u, v, label in g.edges}
    for _ in range(edits):
        n = len(nodes)
        ops = ["add_node"]
        if n:
            ops.append("relabel_node")
        if edges:
            ops += ["relabel_edge", "del_edge"]
        if len(edges) < n * (n - 1) // 2:
            ops.append("add_edge")
        op = rng.choice(ops)
        if op == "add_node":
            nodes.append(rng.choice(node_alphabet))
        elif op == "relabel_node":
            i = rng.randrange(n)
            nodes[i] = rng.choice(node_alphabet)
        elif op == "relabel_edge":
            key = rng.choice(sorted(edges))
            edges[key] = rng.choice(edge_alphabet)
        elif op == "del_edge":
            del edges[rng.choice(sorted(edges))]
        else:
            free = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
            edges[rng.choice(free)] = rng.choice(edge_alphabet)
    return LabeledGraph(
        graph_id if graph_id is not None else f"{g.id}~{seed}",
        tuple(nodes),
        tuple((u, v, label) for (u, v), label in sorted(edges.items())),
    )
