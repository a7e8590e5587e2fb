"""Full-scale acceptance criteria.

Each test records one PASS/FAIL line, printed in the terminal summary and
echoed as the test runs. These are slow: together they take tens of minutes.
"""

import random

import pytest

from conftest import ACCEPTANCE_LINES
from gedcmt import checks
from gedcmt.bench import BenchConfig, run_bench, write_outputs
from gedcmt.cmt import CmtConfig, build, deserialize, range_query, serialize, verify_suspected
from gedcmt.graph import random_collection, random_graph
from gedcmt.metric import EuclideanMetric, EuclideanPoint, GedMetric

pytestmark = pytest.mark.acceptance


@pytest.fixture
def record(capsys):
    def _record(number: int, ok: bool, text: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"
        ACCEPTANCE_LINES[number] = line
        with capsys.disabled():
            print("\n" + line)

    return _record


def _suite(record, number, report):
    record(number, report.ok, report.summary())
    assert report.ok, "\n".join(report.failures[:20])


def test_1_oracle_equivalence(record):
    report = checks.oracle_equivalence(datasets=50, size=100, nodes=(4, 10), queries=10, radii=(1, 2, 3, 5), seed=1)
    assert report.cases == 50 * 10 * 4
    _suite(record, 1, report)


def test_2_bound_sandwich(record):
    report = checks.bound_sandwich(pairs=1000, max_nodes=8, seed=2)
    assert report.cases == 1000
    _suite(record, 2, report)


def test_3_metric_axioms(record):
    report = checks.metric_axioms(triples=300, max_nodes=6, seed=3)
    assert report.cases == 300
    _suite(record, 3, report)


def test_4_lsap_exactness(record):
    report = checks.lsap_exactness(matrices=200, max_n=7, seed=4)
    assert report.cases == 200
    _suite(record, 4, report)


def test_5_euclidean_debug_path(record):
    report = checks.euclidean_debug(points=1000, queries=25, seed=5, radii=(0.02, 0.05, 0.1, 0.3))
    assert report.cases == 2 * 25 * 4
    _suite(record, 5, report)


def test_6_threshold_verification(record):
    report = checks.threshold_consistency(pairs=500, max_nodes=7, taus=(0, 1, 2, 3, 5), seed=6)
    assert report.cases == 500 * 5
    _suite(record, 6, report)


def test_7_default_bench_sweep(record, tmp_path):
    config = BenchConfig()
    # both runs abort with BenchMismatch if any cell's methods disagree
    first, second = run_bench(config), run_bench(config)
    write_outputs(first, tmp_path / "a.csv")
    write_outputs(second, tmp_path / "b.csv")
    same = all(
        (tmp_path / f"a{suffix}").read_bytes() == (tmp_path / f"b{suffix}").read_bytes()
        for suffix in (".csv", ".build.csv", ".report.txt")
    )
    cells = len(config.seeds) * len(config.sizes) * len(config.node_ranges) * len(config.radii)
    verdicts = [line for line in first.report if "-> fewer:" in line]
    rows_ok = len(first.rows) == cells * config.queries * 2
    ok = same and len(verdicts) == cells and rows_ok
    cmt_wins = sum(line.endswith("fewer: cmt") for line in verdicts)
    record(7, ok, f"{cells} cells, {len(first.rows)} rows, deterministic={same}, cmt did less work in {cmt_wins}/{cells} cells")
    assert ok


def test_8_serialization_round_trip(record):
    failures = []
    rng = random.Random(8)
    for k in range(20):
        config = CmtConfig(branching=rng.randint(2, 4), leaf_capacity=rng.randint(1, 10), pivot_seed=k)
        if k % 4 == 3:
            metric = EuclideanMetric(2, fuzz=rng.choice([0, 0.1]))
            items = [EuclideanPoint(f"p{i}", (rng.random(), rng.random())) for i in range(200)]
            queries = [EuclideanPoint(f"q{i}", (rng.random(), rng.random())) for i in range(3)]
            radii = [0.05, 0.2]
        else:
            metric = GedMetric()
            items = random_collection(rng.getrandbits(32), 40, (3, 8)).graphs
            queries = [random_graph(rng.getrandbits(32), (3, 8), graph_id=f"q{i}") for i in range(3)]
            radii = [1, 3]
        tree = build(items, metric, config)
        text = serialize(tree, metric)
        again = deserialize(text, items, metric)
        if serialize(again, metric) != text:
            failures.append(f"index {k}: re-serialization differs")
        for q in queries:
            for r in radii:
                a, b = range_query(tree, q, r, metric), range_query(again, q, r, metric)
                if a != b or verify_suspected(a, q, r, metric) != verify_suspected(b, q, r, metric):
                    failures.append(f"index {k}: query {q.id} radius {r} differs")
    record(8, not failures, f"20 indexes, {len(failures)} violations")
    assert not failures, failures
