"""Benchmark sweep comparing the tree against filter-verify.

Each cell is one (seed, dataset size, node-count range, radius). Both
methods answer the same queries; their answer sets must agree or the run
aborts. Results are written as CSV rows keyed by operation counts.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path

from .bounds import BoundConfig
from .cmt import CmtConfig, build, range_query, verify_suspected
from .costs import CostModel
from .exact import DEFAULT_MAX_NODES
from .graph import DEFAULT_EDGE_ALPHABET, DEFAULT_EDGE_DENSITY, DEFAULT_NODE_ALPHABET, perturb_graph, random_collection
from .metric import GedMetric
from .search import filter_verify_scan, linear_distances
from .stats import QueryStats

log = logging.getLogger(__name__)


class BenchMismatch(AssertionError):
    """The two methods (or the oracle) disagreed on an answer set."""


class InfeasibleCell(ValueError):
    pass


@dataclass
class BenchConfig:
    sizes: list = field(default_factory=lambda: [50, 100, 200, 500])
    node_ranges: list = field(default_factory=lambda: [[4, 8], [8, 12]])
    radii: list = field(default_factory=lambda: [1, 2, 3, 5])
    queries: int = 5
    seeds: list = field(default_factory=lambda: [0])
    cost_model: str = "1,1,1,1,1,1"
    refine_iterations: int = BoundConfig().refine_iterations
    branching: int = 2
    leaf_capacity: int = 8
    pivot_seed: int = 0
    node_alphabet: list = field(default_factory=lambda: list(DEFAULT_NODE_ALPHABET))
    edge_alphabet: list = field(default_factory=lambda: list(DEFAULT_EDGE_ALPHABET))
    edge_density: float = DEFAULT_EDGE_DENSITY
    # queries are database graphs moved by up to this many random edits
    query_edits: int = 3
    max_nodes: int = DEFAULT_MAX_NODES
    check_oracle: bool = False
    # wall-clock columns make the CSV machine-dependent; off by default
    timing: bool = False
    output: str | None = None

    def __post_init__(self):
        for name in ("sizes", "node_ranges", "radii", "seeds"):
            if not getattr(self, name):
                raise ValueError(f"bench config: {name} must be non-empty")
        if self.queries < 1:
            raise ValueError("bench config: queries must be >= 1")
        if any(s < 1 for s in self.sizes):
            raise ValueError("bench config: dataset sizes must be >= 1")
        for rng in self.node_ranges:
            if len(rng) != 2 or rng[0] < 0 or rng[1] < rng[0]:
                raise ValueError(f"bench config: bad node range {rng!r}")
        if any(Fraction(r) < 0 for r in self.radii):
            raise ValueError("bench config: radii must be non-negative")
        CostModel.parse(self.cost_model)
        CmtConfig(self.branching, self.leaf_capacity, self.pivot_seed)
        BoundConfig(self.refine_iterations)

    @classmethod
    def from_dict(cls, doc: dict) -> "BenchConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"bench config: unknown field(s) {sorted(unknown)}")
        return cls(**doc)

    @classmethod
    def load(cls, path) -> "BenchConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def metric(self) -> GedMetric:
        return GedMetric(
            CostModel.parse(self.cost_model), BoundConfig(self.refine_iterations), max_nodes=self.max_nodes
        )


@dataclass
class BenchRow:
    dataset_size: int
    avg_graph_nodes: str
    radius: str
    method: str
    result_count: int | str
    exact_calls: int
    bound_calls: int
    lsap_calls: int
    verify_calls: int
    nodes_visited: int
    wall_ms: str
    seed: int

    def work(self) -> int:
        return self.exact_calls + self.bound_calls + self.verify_calls


CSV_HEADER = ",".join(f.name for f in fields(BenchRow))


def rows_to_csv(rows: list[BenchRow]) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join(str(v) for v in asdict(row).values()))
    return "\n".join(lines) + "\n"


@dataclass
class BenchResult:
    rows: list[BenchRow]
    build_rows: list[BenchRow]
    report: list[str]

    def csv(self) -> str:
        return rows_to_csv(self.rows)

    def build_csv(self) -> str:
        return rows_to_csv(self.build_rows)


def _cell_seed(*parts) -> int:
    return random.Random(":".join(str(p) for p in parts)).getrandbits(63)


def _row(config, size, avg_nodes, radius, method, count, stats: QueryStats, seed) -> BenchRow:
    wall = f"{stats.wall_time * 1000:.3f}" if config.timing else "0"
    return BenchRow(
        dataset_size=size,
        avg_graph_nodes=avg_nodes,
        radius=radius,
        method=method,
        result_count=count,
        exact_calls=stats.exact_calls,
        bound_calls=stats.bound_calls,
        lsap_calls=stats.lsap_calls,
        verify_calls=stats.verify_calls,
        nodes_visited=stats.nodes_visited,
        wall_ms=wall,
        seed=seed,
    )


def run_bench(config: BenchConfig, progress=None) -> BenchResult:
    """Run every cell of the sweep. Deterministic given the config."""
    metric = config.metric()
    cmt_config = CmtConfig(config.branching, config.leaf_capacity, config.pivot_seed)
    radii = [Fraction(r) for r in config.radii]
    rows: list[BenchRow] = []
    build_rows: list[BenchRow] = []
    report = [f"cost model {config.cost_model}; {metric.describe()}; work = exact_calls + bound_calls + verify_calls"]

    for seed in config.seeds:
        for size in config.sizes:
            for lo, hi in config.node_ranges:
                if hi + config.query_edits > config.max_nodes:
                    raise InfeasibleCell(
                        f"node range {lo}..{hi} plus {config.query_edits} query edits exceeds exact-GED cap {config.max_nodes}"
                    )
                data_seed = _cell_seed(seed, size, lo, hi)
                db = random_collection(
                    data_seed, size, (lo, hi), config.node_alphabet, config.edge_alphabet, config.edge_density
                )
                avg_nodes = f"{sum(g.node_count for g in db) / size:.2f}"
                tree = build(db.graphs, metric, cmt_config)
                build_rows.append(_row(config, size, avg_nodes, "", "cmt_build", size, tree.build_stats, seed))
                if progress:
                    progress(f"seed {seed} size {size} nodes {lo}..{hi}: built ({tree.build_stats.exact_calls} exact calls)")

                qrng = random.Random(_cell_seed("queries", data_seed))
                queries = []
                for qi in range(config.queries):
                    base = db[qrng.randrange(size)]
                    edits = qrng.randint(0, config.query_edits)
                    queries.append(
                        perturb_graph(
                            base, qrng.getrandbits(63), edits, config.node_alphabet, config.edge_alphabet, graph_id=f"q{qi}"
                        )
                    )
                truth = [linear_distances(db, q, metric) for q in queries] if config.check_oracle else None

                for r in radii:
                    totals = {"cmt": 0, "filter_verify": 0}
                    for qi, q in enumerate(queries):
                        res = verify_suspected(range_query(tree, q, r, metric), q, r, metric)
                        fv, fv_stats = filter_verify_scan(db, q, r, metric)
                        if res.answers != fv:
                            raise BenchMismatch(
                                f"answer mismatch seed={seed} size={size} nodes={lo}..{hi} query={q.id} radius={r}: "
                                f"cmt-only {sorted(res.answers - fv)}, filter-verify-only {sorted(fv - res.answers)}"
                            )
                        if truth is not None:
                            expected = frozenset(g for g, d in truth[qi].items() if d <= r)
                            if expected != fv:
                                raise BenchMismatch(
                                    f"oracle mismatch seed={seed} size={size} nodes={lo}..{hi} query={q.id} radius={r}"
                                )
                        for method, count, stats in (("cmt", len(res.answers), res.stats), ("filter_verify", len(fv), fv_stats)):
                            row = _row(config, size, avg_nodes, str(r), method, count, stats, seed)
                            rows.append(row)
                            totals[method] += row.work()
                    a, b = totals["cmt"], totals["filter_verify"]
                    winner = "cmt" if a < b else "filter_verify" if b < a else "tie"
                    report.append(
                        f"seed={seed} size={size} nodes={lo}..{hi} radius={r}: cmt work {a}, "
                        f"filter_verify work {b} -> fewer: {winner}"
                    )
                    if progress:
                        progress(report[-1])
    return BenchResult(rows, build_rows, report)


def companion_paths(out) -> tuple[Path, Path]:
    out = Path(out)
    stem = out.with_suffix("")
    return stem.with_name(stem.name + ".build.csv"), stem.with_name(stem.name + ".report.txt")


def write_outputs(result: BenchResult, out) -> None:
    out = Path(out)
    build_path, report_path = companion_paths(out)
    out.write_text(result.csv(), encoding="utf-8")
    build_path.write_text(result.build_csv(), encoding="utf-8")
    report_path.write_text("\n".join(result.report) + "\n", encoding="utf-8")
