from __future__ import annotations

from fractions import Fraction

import networkx as nx
import pytest
import sympy
from hypothesis import given, strategies as st

from qtunnel.exact import RadicalScalar
from qtunnel.graph import complete_graph, cycle_graph, path_graph, star_graph, to_networkx, y_graph
from qtunnel.verify import enumerate_walks
from qtunnel.walks import (cospectrality, geodesic_coupling, return_probabilities, return_probability,
                           shortest_distance, transition_powers, well_walk_sum)

from conftest import connected_graphs


def sympy_transition(g):
    return sympy.Matrix(g.n, g.n, lambda i, j: sympy.Rational(1, g.degree[i]) if g.has_edge(i, j) else 0)


def test_examples():
    assert transition_powers(cycle_graph(4), 2).entry(2, 0, 0) == Fraction(1, 2)
    assert transition_powers(complete_graph(3), 3).entry(3, 0, 0) == Fraction(1, 4)
    assert return_probability(cycle_graph(4), 0, 3) == 0
    assert return_probability(path_graph(5), 3, 0) == 1
    assert return_probability(path_graph(3), 1, 2) == 1
    assert shortest_distance(path_graph(3), 0, 2) == 2


@given(connected_graphs(max_n=6), st.integers(0, 5))
def test_powers_match_sympy_matrix_power(g, K):
    table = transition_powers(g, K)
    ref = sympy_transition(g) ** K
    for v in range(g.n):
        assert sum(table.entry(K, v, w) for w in range(g.n)) == 1
        for w in range(g.n):
            assert table.entry(K, v, w) == Fraction(int(ref[v, w].p), int(ref[v, w].q))


@given(connected_graphs(max_n=6), st.data())
def test_avoiding_powers_match_enumeration(g, data):
    avoid = data.draw(st.sets(st.integers(0, g.n - 1), max_size=3))
    K = 5
    table = transition_powers(g, K, avoid)
    brute = enumerate_walks(g, K, avoid)
    assert all(table.entry(k, v, w) == brute[k][v][w]
               for k in range(K + 1) for v in range(g.n) for w in range(g.n))


def test_enumeration_oracle_by_hand():
    # P3, walks 0 -> 2 of length 2: the single walk 0,1,2 with weight 1 * 1/2
    assert enumerate_walks(path_graph(3), 2)[2][0][2] == Fraction(1, 2)
    # interior avoiding {1}: no length-2 walk survives
    assert enumerate_walks(path_graph(3), 2, {1})[2][0][2] == 0


def test_cospectrality_examples():
    assert cospectrality(cycle_graph(6), 0, 2).saturated
    co = cospectrality(path_graph(3), 0, 1)
    assert (co.value, co.saturated) == (1, False)
    assert cospectrality(star_graph(3), 1, 2).saturated
    with pytest.raises(ValueError):
        cospectrality(path_graph(3), 1, 1)


@given(connected_graphs(max_n=6))
def test_cospectrality_is_symmetric_and_consistent(g):
    K = 6
    for x in range(g.n):
        for y in range(x + 1, g.n):
            co = cospectrality(g, x, y, K)
            assert co == cospectrality(g, y, x, K)
            px, py = return_probabilities(g, x, K), return_probabilities(g, y, K)
            assert px[:co.value + 1] == py[:co.value + 1]
            if not co.saturated:
                assert px[co.value + 1] != py[co.value + 1]


def test_geodesic_coupling_examples():
    assert geodesic_coupling(path_graph(3), 0, 2) == RadicalScalar(Fraction(1, 2))
    assert geodesic_coupling(cycle_graph(4), 0, 2) == RadicalScalar(Fraction(1, 2))
    g, hubs = y_graph((3, 3, 3))
    assert geodesic_coupling(g, hubs[0], hubs[1]) == RadicalScalar(Fraction(1, 6))
    with pytest.raises(ValueError):
        geodesic_coupling(g, 0, 0)


def _coupling_oracle(g, u, v):
    h = to_networkx(g)
    total = 0
    for path in nx.all_shortest_paths(h, u, v):
        term = sympy.Integer(1)
        for a, b in zip(path, path[1:]):
            term /= sympy.sqrt(g.degree[a] * g.degree[b])
        total += term
    return sympy.nsimplify(total)


@given(connected_graphs(max_n=7))
def test_geodesic_coupling_matches_path_enumeration(g):
    for u in range(g.n):
        for v in range(u + 1, g.n):
            c = geodesic_coupling(g, u, v)
            want = _coupling_oracle(g, u, v)
            got = sympy.Rational(c.coeff.numerator, c.coeff.denominator) * sympy.sqrt(c.radicand)
            assert sympy.simplify(got - want) == 0
            assert c == geodesic_coupling(g, v, u)
            assert c.sign() == 1


def test_well_walk_sum_examples():
    g = path_graph(3)
    assert well_walk_sum(g, {0, 2}, 0, 0, 2) == RadicalScalar(Fraction(1, 2))
    assert well_walk_sum(g, {0, 2}, 0, 2, 1) == RadicalScalar(Fraction(0))
    assert well_walk_sum(g, {0, 2}, 0, 2, 2) == geodesic_coupling(g, 0, 2)
    with pytest.raises(ValueError):
        well_walk_sum(g, {0, 2}, 0, 1, 2)


@given(connected_graphs(max_n=6))
def test_well_walk_sum_symmetric(g):
    wells = {0, g.n - 1}
    for k in range(1, 6):
        assert well_walk_sum(g, wells, 0, g.n - 1, k) == well_walk_sum(g, wells, g.n - 1, 0, k)
