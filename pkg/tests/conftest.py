from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from qtunnel.graph import Graph, from_edges

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def connected_graphs(draw, min_n: int = 2, max_n: int = 7) -> Graph:
    """Random spanning tree plus random extra edges."""
    n = draw(st.integers(min_n, max_n))
    edges = set()
    for v in range(1, n):
        edges.add((draw(st.integers(0, v - 1)), v))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n))
    for u, v in extra:
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return from_edges(n, sorted(edges))


@pytest.fixture(scope="session")
def atlas_small():
    out = []
    for G in nx.graph_atlas_g()[1:]:
        if G.number_of_nodes() <= 5 and G.number_of_edges() and nx.is_connected(G):
            out.append(from_edges(G.number_of_nodes(), sorted(G.edges())))
    return out


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
