import json

import pytest

from gedcmt.bench import CSV_HEADER
from gedcmt.cli import main, node_range


@pytest.fixture
def db(tmp_path):
    path = tmp_path / "db.jsonl"
    assert main(["gen", "--seed", "1", "--count", "100", "--nodes", "4..10", "--out", str(path)]) == 0
    return path


def test_gen_then_query_finds_itself(db, capsys):
    assert len(db.read_text().splitlines()) == 100
    assert main(["query", "--db", str(db), "--query-id", "g0", "--radius", "0", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert "g0" in out["answers"]
    assert set(out) >= {"confirmed", "suspected", "answers", "stats"}


def test_build_and_query_index(db, tmp_path, capsys):
    index = tmp_path / "idx.json"
    assert main(["build", "--db", str(db), "--out", str(index), "--seed", "3", "--branching", "3"]) == 0
    assert json.loads(index.read_text())["format_version"] == 1
    capsys.readouterr()
    assert main(["query", "--db", str(db), "--index", str(index), "--query-id", "g7", "--radius", "2"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("confirmed") and "answers" in text and "bound_calls" in text


def test_methods_agree(db, tmp_path, capsys):
    q = tmp_path / "q.jsonl"
    q.write_text('{"id":"q","nodes":["C","N","C","O","C"],"edges":[[0,1,"1"],[1,2,"2"],[2,3,"1"]]}\n')
    answers = []
    for method in ("cmt", "filter_verify", "linear"):
        assert main(["query", "--db", str(db), "--query", str(q), "--radius", "4", "--method", method, "--json"]) == 0
        answers.append(json.loads(capsys.readouterr().out)["answers"])
    assert answers[0] == answers[1] == answers[2]


def test_bench_writes_csv(tmp_path, capsys):
    config = tmp_path / "bench.json"
    config.write_text(json.dumps({"sizes": [12], "node_ranges": [[3, 5]], "radii": [1], "queries": 1}))
    out = tmp_path / "results.csv"
    assert main(["bench", "--config", str(config), "--out", str(out), "--seed", "2"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3 and lines[1].endswith(",2")
    assert "fewer:" in capsys.readouterr().out


def test_selftest(capsys):
    assert main(["selftest", "--datasets", "1", "--size", "15", "--queries", "2", "--pairs", "30"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["query", "--db", "missing.jsonl", "--query-id", "g0", "--radius", "1"],
        ["bench", "--config", "missing.json", "--out", "x.csv"],
        ["bench"],
    ],
)
def test_errors_exit_nonzero(argv, capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) != 0
    assert "error" in capsys.readouterr().err


def test_query_errors(db, capsys, tmp_path):
    assert main(["query", "--db", str(db), "--query-id", "zzz", "--radius", "1"]) == 2
    assert main(["query", "--db", str(db), "--radius", "1"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"format_version": 99}')
    assert main(["query", "--db", str(db), "--index", str(bad), "--query-id", "g0", "--radius", "1"]) == 2
    conf = tmp_path / "c.json"
    conf.write_text('{"sizes": [0]}')
    assert main(["bench", "--config", str(conf), "--out", str(tmp_path / "o.csv")]) == 2
    err = capsys.readouterr().err
    assert "zzz" in err and "format_version" in err


@pytest.mark.parametrize("argv", [["frobnicate"], ["gen", "--count", "3", "--out", "-", "--bogus"], ["query", "--radius", "-1"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code != 0


def test_node_range():
    assert node_range("4..10") == (4, 10)
    assert node_range("7") == (7, 7)
    with pytest.raises(Exception):
        node_range("9..3")


def test_gen_stdout_and_cost_model(capsys):
    assert main(["gen", "--seed", "5", "--count", "3", "--nodes", "2..3", "--out", "-"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 3
    with pytest.raises(SystemExit):
        main(["build", "--db", "x", "--out", "y", "--cost-model", "1,2,3"])
