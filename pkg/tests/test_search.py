import pytest

from gedcmt.graph import GraphCollection, LabeledGraph, random_collection, random_graph
from gedcmt.metric import GedMetric
from gedcmt.search import filter_verify_scan, linear_distances, linear_oracle


def test_zero_radius_finds_the_copy():
    db = random_collection(2, 30, (6, 8))
    q = LabeledGraph("q", db[4].node_labels, db[4].edges)
    m = GedMetric()
    answers, stats = filter_verify_scan(db, q, 0, m)
    assert answers == {"g4"}
    assert linear_oracle(db, q, 0, m) == {"g4"}
    assert stats.bound_calls == 30 and stats.nodes_visited == 30


def test_huge_radius_returns_everything():
    db = random_collection(3, 25, (2, 6))
    q = random_graph(1, (3, 5), graph_id="q")
    m = GedMetric()
    answers, stats = filter_verify_scan(db, q, 100, m)
    assert answers == {g.id for g in db}
    assert stats.verify_calls <= len(db)


def test_empty_db():
    m = GedMetric()
    q = random_graph(1, (3, 5))
    assert linear_oracle(GraphCollection(()), q, 3, m) == frozenset()
    assert filter_verify_scan([], q, 3, m)[0] == frozenset()


def test_negative_radius():
    with pytest.raises(ValueError):
        filter_verify_scan([], random_graph(1, (1, 2)), -1, GedMetric())
    with pytest.raises(ValueError):
        linear_oracle([], random_graph(1, (1, 2)), -1, GedMetric())


@pytest.mark.parametrize("r", [1, 2, 3])
def test_filter_verify_equals_exhaustive_scan(r):
    db = random_collection(21, 60, (3, 8))
    m = GedMetric()
    q = random_graph(99, (4, 7), graph_id="q")
    answers, stats = filter_verify_scan(db, q, r, m)
    dist = linear_distances(db, q, m)
    assert answers == {gid for gid, d in dist.items() if d <= r} == linear_oracle(db, q, r, m)
    assert stats.verify_calls <= len(db)
    assert stats.exact_calls == 0
