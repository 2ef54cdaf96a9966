import pytest

from ggrkit.graph import Graph, complete_bipartite_graph, complete_graph, cycle_graph, enumerate_graphs
from ggrkit.oracles import OracleVerdict, ggr_oracle, ggr_oracle_d1, ggr_oracle_d2, is_redundantly_rigid
from ggrkit.stress import is_generically_globally_rigid


def test_d1_examples():
    assert ggr_oracle_d1(cycle_graph(5)).reason == "2-connected"
    path = Graph(3, ((0, 1), (1, 2)))
    assert ggr_oracle_d1(path) == OracleVerdict(False, 1, "not-2-connected")
    assert ggr_oracle_d1(Graph(2, ((0, 1),))).decision
    assert not ggr_oracle_d1(Graph(2, ())).decision
    assert ggr_oracle_d1(Graph(1, ())).decision


def test_d2_examples():
    assert ggr_oracle_d2(complete_graph(4)).decision
    assert ggr_oracle_d2(complete_graph(3)).decision
    assert ggr_oracle_d2(complete_bipartite_graph(3, 3)).reason == "not-redundantly-rigid"
    assert ggr_oracle_d2(cycle_graph(5)).reason == "not-3-connected"
    wheel = Graph(5, ((0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (1, 4)))
    assert ggr_oracle_d2(wheel).decision


def test_redundant_rigidity():
    assert is_redundantly_rigid(complete_graph(4), 2)
    assert not is_redundantly_rigid(complete_bipartite_graph(3, 3), 2)
    assert not is_redundantly_rigid(cycle_graph(4), 2)


def test_dispatch():
    assert ggr_oracle(complete_graph(4), 2).dimension == 2
    with pytest.raises(ValueError):
        ggr_oracle(complete_graph(5), 3)
    with pytest.raises(ValueError):
        OracleVerdict(True, 3, "x")


@pytest.mark.parametrize("n", range(1, 6))
def test_engine_agrees_d1(n):
    for g in enumerate_graphs(n):
        assert is_generically_globally_rigid(g, 1).decision == ggr_oracle_d1(g).decision, g


@pytest.mark.parametrize("n", range(1, 6))
def test_engine_agrees_d2(n):
    for g in enumerate_graphs(n):
        assert is_generically_globally_rigid(g, 2).decision == ggr_oracle_d2(g).decision, g
