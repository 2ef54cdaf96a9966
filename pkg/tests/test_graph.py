from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings

from conftest import brute_cliques, brute_k_connected, graphs
from ggrkit.graph import (
    Graph,
    GraphFormatError,
    UnsupportedSizeError,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    disjoint_union,
    enumerate_graphs,
    find_cliques,
    graph_from_mask,
    has_clique,
    is_connected,
    is_k_connected,
    parse_edge_list,
    parse_graph6,
    read_edge_lists,
    read_graph6_lines,
    serialize_edge_list,
    serialize_graph6,
)


def nx_graph6(g: Graph) -> str:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return nx.to_graph6_bytes(h, header=False).decode().strip()


class TestGraph:
    def test_edges_are_canonical(self):
        g = Graph(4, ((3, 1), (0, 2), (2, 1)))
        assert g.edges == ((0, 2), (1, 2), (1, 3))
        assert g.has_edge(3, 1) and not g.has_edge(0, 1)
        assert g.edge_index(3, 1) == 2

    @pytest.mark.parametrize("edges", [((0, 0),), ((0, 4),), ((0, 1), (1, 0)), ((-1, 2),)])
    def test_invalid_edges(self, edges):
        with pytest.raises(ValueError):
            Graph(4, edges)

    def test_remove_and_add(self):
        g = complete_graph(4)
        h = g.remove_edge(0)
        assert h.m == 5 and not h.has_edge(0, 1)
        assert h == g.remove_edge((1, 0))
        assert h.add_edge(0, 1) == g
        with pytest.raises(KeyError):
            h.remove_edge((0, 1))

    def test_builders(self):
        assert complete_graph(5).m == 10
        assert cycle_graph(4).edges == ((0, 1), (0, 3), (1, 2), (2, 3))
        k33 = complete_bipartite_graph(3, 3)
        assert k33.m == 9 and not has_clique(k33, 3)
        u = disjoint_union(complete_graph(3), complete_graph(2))
        assert u.n == 5 and u.edges == ((0, 1), (0, 2), (1, 2), (3, 4))


class TestGraph6:
    def test_known_encodings(self):
        assert serialize_graph6(complete_graph(4)) == "C~"
        assert serialize_graph6(Graph(0, ())) == "?"
        assert serialize_graph6(Graph(1, ())) == "@"
        # worked example from the format description: edges 0-2, 0-4, 1-3, 3-4
        assert parse_graph6("DQc") == Graph(5, ((0, 2), (0, 4), (1, 3), (3, 4)))
        assert serialize_graph6(Graph(5, ((0, 2), (0, 4), (1, 3), (3, 4)))) == "DQc"

    def test_header_and_whitespace(self):
        assert parse_graph6(">>graph6<<C~\n") == complete_graph(4)

    @pytest.mark.parametrize("text,offset", [("C~ ", 2), ("C", 1), ("C~~", 2), ("D~~", 2), ("", 0)])
    def test_errors_carry_offsets(self, text, offset):
        with pytest.raises(GraphFormatError) as info:
            parse_graph6(text)
        assert info.value.offset == offset

    def test_padding_must_be_zero(self):
        # n=3: 3 data bits, 3 padding bits; 'B' + chr(63 + 0b111111) sets padding
        with pytest.raises(GraphFormatError, match="padding"):
            parse_graph6("B~")

    def test_size_limit(self):
        with pytest.raises(UnsupportedSizeError):
            serialize_graph6(Graph(63, ()))

    @settings(max_examples=300, deadline=None)
    @given(graphs(max_n=12))
    def test_matches_reference_encoder(self, g):
        s = serialize_graph6(g)
        assert s == nx_graph6(g)
        assert parse_graph6(s) == g

    def test_stream_reports_line(self):
        with pytest.raises(GraphFormatError, match="line 3"):
            list(read_graph6_lines([">>graph6<<", "C~", "C!"]))
        assert list(read_graph6_lines(["", "C~", "  "])) == [complete_graph(4)]


class TestEdgeList:
    def test_round_trip(self):
        g = cycle_graph(5)
        assert parse_edge_list(serialize_edge_list(g)) == g

    def test_comments(self):
        assert parse_edge_list("# triangle\n3 3\n0 1\n1 2\n0 2\n") == complete_graph(3)

    @pytest.mark.parametrize("text", ["", "3\n", "3 2\n0 1\n", "3 1\n0 3\n", "3 1\n0 x\n", "2 1\n1 1\n"])
    def test_errors(self, text):
        with pytest.raises(GraphFormatError):
            parse_edge_list(text)

    def test_concatenated(self):
        gs = list(read_edge_lists("3 2\n0 1\n1 2\n\n2 0\n4 1\n0 3\n".splitlines()))
        assert [g.n for g in gs] == [3, 2, 4]
        with pytest.raises(GraphFormatError, match="truncated"):
            list(read_edge_lists(["3 2", "0 1"]))


class TestCliques:
    def test_examples(self):
        assert len(find_cliques(complete_graph(4), 3)) == 4
        assert find_cliques(cycle_graph(5), 3) == []
        k5e = complete_graph(5).remove_edge((0, 1))
        assert find_cliques(k5e, 4) == [(0, 2, 3, 4), (1, 2, 3, 4)]
        assert find_cliques(complete_graph(3), 4) == []
        assert find_cliques(complete_graph(3), 0) == []

    @settings(max_examples=200, deadline=None)
    @given(graphs(max_n=7))
    def test_agrees_with_brute_force(self, g):
        for k in range(1, g.n + 1):
            assert find_cliques(g, k) == brute_cliques(g, k)
            assert has_clique(g, k) == bool(brute_cliques(g, k))


class TestConnectivity:
    @settings(max_examples=200, deadline=None)
    @given(graphs(max_n=7))
    def test_agrees_with_brute_force(self, g):
        h = nx.Graph()
        h.add_nodes_from(range(g.n))
        h.add_edges_from(g.edges)
        if g.n:
            assert is_connected(g) == nx.is_connected(h)
        for k in (1, 2, 3):
            assert is_k_connected(g, k) == brute_k_connected(g, k)

    def test_examples(self):
        assert is_k_connected(cycle_graph(5), 2)
        assert not is_k_connected(cycle_graph(5), 3)
        assert is_k_connected(complete_graph(4), 3)
        assert not is_k_connected(complete_graph(3), 3)  # needs n > k
        two_triangles = Graph(5, ((0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)))
        assert is_connected(two_triangles) and not is_k_connected(two_triangles, 2)


class TestEnumeration:
    @pytest.mark.parametrize("n,total,connected", [(1, 1, 1), (2, 2, 1), (3, 8, 4), (4, 64, 38), (5, 1024, 728)])
    def test_counts(self, n, total, connected):
        assert sum(1 for _ in enumerate_graphs(n)) == total
        assert sum(1 for _ in enumerate_graphs(n, connected_only=True)) == connected

    def test_mask_order(self):
        gs = list(enumerate_graphs(3))
        assert gs[0].m == 0 and gs[-1] == complete_graph(3)
        pairs = list(combinations(range(3), 2))
        for mask, g in enumerate(gs):
            assert g.edges == tuple(p for i, p in enumerate(pairs) if mask >> i & 1)
            assert graph_from_mask(3, mask) == g

    def test_limit(self):
        with pytest.raises(UnsupportedSizeError):
            next(enumerate_graphs(9))
