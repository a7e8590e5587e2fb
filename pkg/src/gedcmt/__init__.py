"""Graph edit distance similarity search with a cascading metric tree."""

from .bench import BenchConfig, BenchRow, run_bench
from .bounds import BoundConfig, DistanceInterval, assignment_ub, branch_lb, label_multiset_lb, pair_bounds
from .cmt import CmtConfig, CmtTree, QueryResult, build, deserialize, range_query, search, serialize, verify_suspected
from .costs import CostModel, EditMapping, induced_cost
from .exact import GedTooLarge, exact_ged, ged_within
from .graph import GraphCollection, LabeledGraph, load_collection, parse_collection, random_graph, validate
from .lsap import solve_lsap
from .metric import EuclideanMetric, EuclideanPoint, GedMetric, MetricSpec
from .search import filter_verify_scan, linear_oracle
from .stats import QueryStats

__version__ = "0.1.0"

__all__ = [
    "BenchConfig", "BenchRow", "BoundConfig", "CmtConfig", "CmtTree", "CostModel", "DistanceInterval",
    "EditMapping", "EuclideanMetric", "EuclideanPoint", "GedMetric", "GedTooLarge", "GraphCollection",
    "LabeledGraph", "MetricSpec", "QueryResult", "QueryStats", "assignment_ub", "branch_lb", "build",
    "deserialize", "exact_ged", "filter_verify_scan", "ged_within", "induced_cost", "label_multiset_lb",
    "linear_oracle", "load_collection", "pair_bounds", "parse_collection", "random_graph", "range_query",
    "run_bench", "search", "serialize", "solve_lsap", "validate", "verify_suspected",
]
