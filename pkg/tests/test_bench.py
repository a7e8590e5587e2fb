import json

import pytest

from gedcmt.bench import (
    CSV_HEADER,
    BenchConfig,
    BenchMismatch,
    InfeasibleCell,
    companion_paths,
    run_bench,
    write_outputs,
)
from gedcmt.bounds import DistanceInterval
from gedcmt.metric import GedMetric

SMALL = dict(sizes=[20], node_ranges=[[3, 6]], radii=[1, 2], queries=2)


def test_header_matches_fields():
    assert CSV_HEADER == (
        "dataset_size,avg_graph_nodes,radius,method,result_count,exact_calls,"
        "bound_calls,lsap_calls,verify_calls,nodes_visited,wall_ms,seed"
    )


def test_one_query_gives_two_rows():
    result = run_bench(BenchConfig(sizes=[15], node_ranges=[[3, 5]], radii=[2], queries=1))
    assert [r.method for r in result.rows] == ["cmt", "filter_verify"]
    assert result.rows[0].result_count == result.rows[1].result_count
    assert [r.method for r in result.build_rows] == ["cmt_build"]
    assert result.build_rows[0].exact_calls > 0
    assert all(r.exact_calls == 0 for r in result.rows if r.method == "filter_verify")


def test_row_count_and_oracle():
    config = BenchConfig(sizes=[50, 100, 200], node_ranges=[[3, 7]], radii=[1, 2, 3], queries=5, check_oracle=True)
    result = run_bench(config)
    assert len(result.rows) == 90
    assert len(result.build_rows) == 3
    assert len(result.report) == 1 + 9
    assert all("fewer:" in line for line in result.report[1:])


def test_deterministic(tmp_path):
    config = BenchConfig(**SMALL)
    a, b = run_bench(config), run_bench(config)
    assert a.csv() == b.csv() and a.build_csv() == b.build_csv() and a.report == b.report
    out = tmp_path / "r.csv"
    write_outputs(a, out)
    build_path, report_path = companion_paths(out)
    assert out.read_text().splitlines()[0] == CSV_HEADER
    assert build_path.exists() and report_path.read_text().startswith("cost model")


def test_seed_changes_data():
    a = run_bench(BenchConfig(**SMALL, seeds=[0])).csv()
    b = run_bench(BenchConfig(**SMALL, seeds=[1])).csv()
    assert a != b


def test_timing_flag():
    rows = run_bench(BenchConfig(**SMALL)).rows
    assert {r.wall_ms for r in rows} == {"0"}
    rows = run_bench(BenchConfig(**SMALL, timing=True)).rows
    assert any(r.wall_ms != "0" for r in rows)


class _LyingMetric(GedMetric):
    """Upper bounds that are too small, so the tree confirms wrong items."""

    def bounds(self, a, b, stats=None):
        super().bounds(a, b, stats)
        return DistanceInterval(0, 0)


def test_mismatch_aborts(monkeypatch):
    monkeypatch.setattr(BenchConfig, "metric", lambda self: _LyingMetric())
    with pytest.raises(BenchMismatch, match="query=q"):
        run_bench(BenchConfig(**SMALL))


def test_infeasible_cell():
    with pytest.raises(InfeasibleCell):
        run_bench(BenchConfig(sizes=[5], node_ranges=[[4, 15]], radii=[1], queries=1))


@pytest.mark.parametrize(
    "doc",
    [
        {"sizes": []},
        {"radii": [-1]},
        {"queries": 0},
        {"node_ranges": [[5, 3]]},
        {"cost_model": "1,1"},
        {"branching": 1},
        {"refine_iterations": -2},
        {"colour": "blue"},
    ],
)
def test_config_validation(doc):
    with pytest.raises(ValueError):
        BenchConfig.from_dict(doc)


def test_config_file(tmp_path):
    path = tmp_path / "b.json"
    path.write_text(json.dumps({"sizes": [10], "radii": [1, 3], "seeds": [4]}))
    config = BenchConfig.load(path)
    assert config.sizes == [10] and config.seeds == [4] and config.queries == 5
