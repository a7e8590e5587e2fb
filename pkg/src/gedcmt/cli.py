"""Command line entry point: ``gedcmt {gen,build,query,bench,selftest}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .bench import BenchConfig, run_bench, write_outputs
from .bounds import BoundConfig
from .checks import bound_sandwich, oracle_equivalence
from .cmt import CmtConfig, IndexFormatError, build, deserialize, range_query, serialize, verify_suspected
from .costs import CostModel
from .graph import DEFAULT_EDGE_DENSITY, GraphFormatError, load_collection, random_collection, save_collection
from .metric import GedMetric
from .search import filter_verify_scan, linear_oracle

log = logging.getLogger("gedcmt")


class CliError(Exception):
    pass


def node_range(text: str) -> tuple[int, int]:
    """Parse ``4..10`` (or a single ``7``) into an inclusive range."""
    lo, sep, hi = text.partition("..")
    try:
        lo_i = int(lo)
        hi_i = int(hi) if sep else lo_i
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    if lo_i < 0 or hi_i < lo_i:
        raise argparse.ArgumentTypeError(f"bad node range {text!r}")
    return lo_i, hi_i


def cost_model(text: str) -> CostModel:
    try:
        return CostModel.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def radius(text: str) -> Fraction:
    try:
        r = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad radius {text!r}") from None
    if r < 0:
        raise argparse.ArgumentTypeError("radius must be non-negative")
    return r


def _labels(text: str) -> list[str]:
    labels = [s for s in text.split(",") if s]
    if not labels:
        raise argparse.ArgumentTypeError("label alphabet must be non-empty")
    return labels


def _add_metric_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cost-model", type=cost_model, default=CostModel(),
                   help="six costs: node_ins,node_del,node_sub,edge_ins,edge_del,edge_sub (default all 1)")
    p.add_argument("--refine-iters", type=int, default=BoundConfig().refine_iterations, metavar="K",
                   help="swap-refinement passes for the assignment upper bound")


def _add_tree_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--branching", type=int, default=CmtConfig().branching)
    p.add_argument("--leaf-capacity", type=int, default=CmtConfig().leaf_capacity)
    p.add_argument("--seed", type=int, default=0, help="pivot selection seed")


def _metric(args) -> GedMetric:
    return GedMetric(args.cost_model, BoundConfig(args.refine_iters))


def _tree_config(args) -> CmtConfig:
    return CmtConfig(args.branching, args.leaf_capacity, args.seed)


def cmd_gen(args) -> int:
    coll = random_collection(
        args.seed, args.count, args.nodes, args.node_labels, args.edge_labels, args.density, prefix=args.prefix
    )
    if args.out == "-":
        for g in coll:
            print(g.to_json())
    else:
        save_collection(coll, args.out)
        log.info("wrote %d graphs to %s", len(coll), args.out)
    return 0


def cmd_build(args) -> int:
    db = load_collection(args.db)
    metric = _metric(args)
    tree = build(db.graphs, metric, _tree_config(args))
    Path(args.out).write_text(serialize(tree, metric), encoding="utf-8")
    log.info("indexed %d graphs (depth %d, %d exact calls) -> %s",
             len(db), tree.depth(), tree.build_stats.exact_calls, args.out)
    return 0


def _load_query(args, db):
    if args.query_id is not None:
        if args.query is not None:
            raise CliError("give either --query-id or --query, not both")
        try:
            return db.get(args.query_id)
        except KeyError:
            raise CliError(f"no graph with id {args.query_id!r} in {args.db}") from None
    if args.query is None:
        raise CliError("one of --query-id or --query is required")
    coll = load_collection(args.query)
    if len(coll) != 1:
        raise CliError(f"{args.query} must contain exactly one graph, found {len(coll)}")
    return coll[0]


def cmd_query(args) -> int:
    db = load_collection(args.db)
    metric = _metric(args)
    q = _load_query(args, db)
    r = args.radius
    if args.method == "cmt":
        if args.index:
            tree = deserialize(Path(args.index).read_text(encoding="utf-8"), db.graphs, metric)
        else:
            tree = build(db.graphs, metric, _tree_config(args))
        res = range_query(tree, q, r, metric)
        final = verify_suspected(res, q, r, metric)
        out = {
            "query": q.id,
            "radius": str(r),
            "confirmed": sorted(res.confirmed),
            "suspected": sorted(res.suspected),
            "answers": sorted(final.answers),
            "stats": final.stats.counters(),
        }
    elif args.method == "filter_verify":
        answers, stats = filter_verify_scan(db, q, r, metric)
        out = {"query": q.id, "radius": str(r), "answers": sorted(answers), "stats": stats.counters()}
    else:
        answers = linear_oracle(db, q, r, metric)
        out = {"query": q.id, "radius": str(r), "answers": sorted(answers)}
    if args.json:
        print(json.dumps(out, sort_keys=True))
    else:
        for key in ("confirmed", "suspected", "answers"):
            if key in out:
                print(f"{key} ({len(out[key])}): {' '.join(out[key])}")
        for key, value in out.get("stats", {}).items():
            print(f"  {key}: {value}")
    return 0


def cmd_bench(args) -> int:
    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CliError(f"{args.config}: invalid JSON: {exc.msg}") from None
        if not isinstance(doc, dict):
            raise CliError(f"{args.config}: config must be a JSON object")
    else:
        doc = {}
    overrides = {
        "seeds": [args.seed] if args.seed is not None else None,
        "cost_model": args.cost_model,
        "refine_iterations": args.refine_iters,
        "branching": args.branching,
        "leaf_capacity": args.leaf_capacity,
    }
    doc.update({k: v for k, v in overrides.items() if v is not None})
    if args.check_oracle:
        doc["check_oracle"] = True
    if args.timing:
        doc["timing"] = True
    config = BenchConfig.from_dict(doc)
    out = args.out or config.output
    if not out:
        raise CliError("no output path: pass --out or set \"output\" in the config")
    progress = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    result = run_bench(config, progress=progress)
    write_outputs(result, out)
    for line in result.report:
        print(line)
    return 0


def cmd_selftest(args) -> int:
    suites = [
        oracle_equivalence(datasets=args.datasets, size=args.size, queries=args.queries, seed=args.seed),
        bound_sandwich(pairs=args.pairs, seed=args.seed),
    ]
    for report in suites:
        print(report.line())
    return 0 if all(r.ok for r in suites) else 1


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gedcmt", description="Graph similarity search with a cascading metric tree.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random graph collection (JSON Lines)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--nodes", type=node_range, default=(4, 10), help="node-count range LO..HI")
    p.add_argument("--density", type=float, default=DEFAULT_EDGE_DENSITY)
    p.add_argument("--node-labels", type=_labels, default=["C", "N", "O"])
    p.add_argument("--edge-labels", type=_labels, default=["1", "2"])
    p.add_argument("--prefix", default="g")
    p.add_argument("--out", required=True, help="output file, or - for stdout")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="build and serialize an index")
    p.add_argument("--db", required=True)
    p.add_argument("--out", required=True)
    _add_metric_flags(p)
    _add_tree_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="run one range query")
    p.add_argument("--db", required=True)
    p.add_argument("--index", help="serialized index; built on the fly when omitted")
    p.add_argument("--query-id", help="use this graph from the collection as the query")
    p.add_argument("--query", help="file holding exactly one query graph")
    p.add_argument("--radius", type=radius, required=True)
    p.add_argument("--method", choices=["cmt", "filter_verify", "linear"], default="cmt")
    p.add_argument("--json", action="store_true", help="print one JSON object")
    _add_metric_flags(p)
    _add_tree_flags(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bench", help="compare the tree with filter-verify over a sweep")
    p.add_argument("--config", help="JSON file with BenchConfig fields; defaults apply when omitted")
    p.add_argument("--out", help="CSV path; .build.csv and .report.txt are written next to it")
    p.add_argument("--seed", type=int, help="run a single seed instead of the config's list")
    p.add_argument("--cost-model", help="six comma-separated costs")
    p.add_argument("--refine-iters", type=int, metavar="K")
    p.add_argument("--branching", type=int)
    p.add_argument("--leaf-capacity", type=int)
    p.add_argument("--check-oracle", action="store_true", help="also compare against a linear exact scan")
    p.add_argument("--timing", action="store_true", help="fill wall_ms (makes the CSV machine-dependent)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("selftest", help="run the oracle-equivalence and bound-sandwich suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--datasets", type=int, default=3)
    p.add_argument("--size", type=int, default=40)
    p.add_argument("--queries", type=int, default=4)
    p.add_argument("--pairs", type=int, default=200)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (CliError, GraphFormatError, IndexFormatError, ValueError, OSError) as exc:
        print(f"gedcmt {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
