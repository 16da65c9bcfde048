from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given

from qtunnel.graph import (DisconnectedGraphError, DuplicateEdgeError, EmptyGraphError, GraphFormatError,
                           LoopEdgeError, complete_graph, cycle_graph, find_automorphism, format_graph_text,
                           load_graph, parse_graph_text, path_graph, read_graph, star_graph, to_networkx,
                           write_graph, y_graph)

from conftest import connected_graphs


def test_load_graph_examples():
    g = load_graph([(0, 1)])
    assert g.n == 2 and g.degree == (1, 1)
    g = load_graph([(0, 1), (1, 2)])
    assert g.degree == (1, 2, 1)


def test_load_graph_relabels_by_first_appearance():
    g = load_graph([(10, 7), (7, 3)])
    assert g.n == 3
    assert g.edges == ((0, 1), (1, 2))


@pytest.mark.parametrize("edges,exc", [
    ([(0, 1), (1, 2), (2, 0), (3, 3)], LoopEdgeError),
    ([(0, 1), (1, 0)], DuplicateEdgeError),
    ([(0, 1), (2, 3)], DisconnectedGraphError),
    ([], EmptyGraphError),
])
def test_load_graph_errors(edges, exc):
    with pytest.raises(exc):
        load_graph(edges)


def test_error_classes_are_distinct():
    classes = {LoopEdgeError, DuplicateEdgeError, DisconnectedGraphError, EmptyGraphError, GraphFormatError}
    assert len(classes) == 5


def test_parse_graph_text_with_comments(tmp_path):
    text = "# a triangle\n3 3\n0 1\n1 2  # inline\n2 0\n"
    g = parse_graph_text(text)
    assert g.n == 3 and g.degree == (2, 2, 2)
    p = tmp_path / "g.txt"
    write_graph(g, p)
    assert read_graph(p) == g
    assert format_graph_text(read_graph(p)) == p.read_text()


@pytest.mark.parametrize("text", ["3\n0 1\n", "2 2\n0 1\n", "2 1\n0 x\n", "2 1\n0 5\n", ""])
def test_parse_graph_text_errors(text):
    with pytest.raises((GraphFormatError, EmptyGraphError)):
        parse_graph_text(text)


def test_distances():
    assert path_graph(3).distances_from(0)[2] == 2
    assert cycle_graph(6).distances_from(0)[3] == 3
    assert cycle_graph(6).distances_from(4)[4] == 0
    with pytest.raises(IndexError):
        path_graph(3).distances_from(3)


@given(connected_graphs())
def test_bfs_matches_networkx(g):
    h = to_networkx(g)
    for v in range(g.n):
        ref = nx.single_source_shortest_path_length(h, v)
        assert g.distances_from(v) == [ref[u] for u in range(g.n)]
    assert g.diameter() == nx.diameter(h)


def test_builders():
    assert complete_graph(4).degree == (3, 3, 3, 3)
    assert star_graph(3).degree == (3, 1, 1, 1)
    g, hubs = y_graph((2, 3, 3))
    assert g.n == 9 and hubs == (1, 3, 6) and g.degree[0] == 3


def test_find_automorphism():
    g = cycle_graph(6)
    auto = find_automorphism(g, {0: 2, 2: 4, 4: 0})
    assert auto is not None
    assert all(g.has_edge(auto[u], auto[v]) for u, v in g.edges)
    assert find_automorphism(path_graph(3), {0: 1}) is None
    g, hubs = y_graph((2, 3, 3))
    assert find_automorphism(g, {hubs[0]: hubs[0], hubs[1]: hubs[2], hubs[2]: hubs[1]}) is not None
    assert find_automorphism(g, {hubs[0]: hubs[1], hubs[1]: hubs[2], hubs[2]: hubs[0]}) is None
