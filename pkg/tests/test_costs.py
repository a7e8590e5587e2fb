from fractions import Fraction

import pytest
from hypothesis import given

from conftest import EMPTY, PATH3, graphs
from gedcmt.costs import CostModel, EditMapping, induced_cost
from oracles import edit_cost


def test_parse_and_str():
    m = CostModel.parse("1, 2, 1/2, 1, 1, 0.5")
    assert m.node_del == 2 and m.node_sub == Fraction(1, 2) and m.edge_sub == Fraction(1, 2)
    assert str(m) == "1,2,1/2,1,1,1/2"
    assert not m.is_metric
    assert CostModel().is_metric


@pytest.mark.parametrize("text", ["1,1,1", "1,1,1,1,1,-1", "1,1,3,1,1,1", "1,1,1,1,1,x"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        CostModel.parse(text)


def test_scaled():
    ic = CostModel(Fraction(1, 2), Fraction(1, 2), Fraction(1, 3), 1, 1, 1).scaled()
    assert ic.scale == 6
    assert (ic.node_ins, ic.node_sub, ic.edge_ins) == (3, 2, 6)


def test_insert_everything():
    mapping = EditMapping((), 3)
    assert mapping.inserted == (0, 1, 2)
    assert induced_cost(EMPTY, PATH3, mapping, CostModel()) == 5


def test_mapping_check():
    with pytest.raises(ValueError, match="injective"):
        EditMapping((0, 0), 3).check(2, 3)
    with pytest.raises(ValueError, match="range"):
        EditMapping((4,), 3).check(1, 3)
    with pytest.raises(ValueError, match="sizes"):
        EditMapping((0,), 3).check(2, 3)


@given(graphs(4, "a"), graphs(4, "b"))
def test_induced_cost_matches_reference(g1, g2):
    cost = CostModel(2, 2, 1, 1, 1, Fraction(1, 2))
    n2 = g2.node_count
    phi = [i if i < n2 else None for i in range(g1.node_count)]
    assert induced_cost(g1, g2, EditMapping(tuple(phi), n2), cost) == edit_cost(g1, g2, phi, cost)
