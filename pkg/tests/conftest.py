import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

from gedcmt.graph import LabeledGraph

sys.path.insert(0, str(Path(__file__).parent))

EMPTY = LabeledGraph("empty")
# three nodes, two edges
PATH3 = LabeledGraph("path3", ("C", "C", "C"), ((0, 1, "1"), (1, 2, "1")))
PATH2 = LabeledGraph("path2", ("C", "C"), ((0, 1, "1"),))


@st.composite
def graphs(draw, max_nodes=5, name="g"):
    n = draw(st.integers(0, max_nodes))
    labels = draw(st.lists(st.sampled_from("CNO"), min_size=n, max_size=n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    edges = tuple((u, v, draw(st.sampled_from("12"))) for u, v in chosen)
    return LabeledGraph(name, tuple(labels), edges)


@pytest.fixture
def tiny_graphs():
    return EMPTY, PATH2, PATH3


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
