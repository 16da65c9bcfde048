from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtunnel.graph import cycle_graph, path_graph
from qtunnel.spectral import PotentialSpec, hamiltonian, spectrum, well_eigenpairs
from qtunnel.wellseries import (MarginError, extend_from_wells, z_general_truncated, ztilde_eigen_target,
                                ztilde_truncated)

from conftest import connected_graphs


def test_ztilde_examples():
    g = path_graph(3)
    lam = -50.0
    z = ztilde_truncated(g, (0, 2), lam, K=2)
    assert z.matrix[0, 1] == pytest.approx(0.5 / (1 - lam) ** 2, rel=1e-14)
    assert ztilde_truncated(g, (0, 2), lam, K=1).matrix[0, 1] == 0
    assert z.matrix[0, 1] == z.matrix[1, 0]
    with pytest.raises(MarginError):
        ztilde_truncated(g, (0, 2), -0.5)


@given(connected_graphs(min_n=3, max_n=7), st.floats(2, 500))
def test_ztilde_tail_bound_holds(g, mag):
    wells = (0, g.n - 1)
    lam = -mag
    short, long_ = ztilde_truncated(g, wells, lam, K=3), ztilde_truncated(g, wells, lam, K=60)
    assert np.all(np.abs(long_.matrix - short.matrix) <= short.tail_bound + 1e-15)


def test_general_matches_simple_prefactor():
    g = cycle_graph(7)
    p = PotentialSpec.simple(7, (0, 3), 40.0)
    lam = -45.0
    zg = z_general_truncated(g, p, lam, K=12)
    zt = ztilde_truncated(g, (0, 3), lam, K=12)
    pref = (1 - lam) / (1 - lam - p.depth)
    assert np.allclose(zg.matrix, pref * zt.matrix, atol=1e-12, rtol=0)


def test_general_single_edge_term():
    g = path_graph(3)
    p = PotentialSpec.simple(3, (0, 1), 20.0)
    lam = -30.0
    zg = z_general_truncated(g, p, lam, K=1)
    assert zg.matrix[0, 1] == pytest.approx(1 / (math.sqrt(1 * 2) * (1 - lam - p.depth)))


def test_general_decays_like_one_over_q():
    g = path_graph(4)
    vals = []
    for q in (1e3, 1e4):
        p = PotentialSpec.simple(4, (0, 3), q)
        vals.append(abs(z_general_truncated(g, p, -0.5 * q, K=6).matrix[0, 1]))
    assert vals[1] < vals[0] / 5


def test_margin_violation():
    g = path_graph(3)
    p = PotentialSpec((1.0, 0.5, 1.0), 10.0)
    with pytest.raises(MarginError):
        z_general_truncated(g, p, 1 - 5.0)  # 1 - lam - Q W(1) = 0


def test_well_eigenpairs_satisfy_fixed_point():
    g = path_graph(4)
    q = 1e3
    d = spectrum(g, PotentialSpec.simple(4, (0, 2), q))
    for k in well_eigenpairs(d, (0, 2)).indices:
        lam = d.values[k]
        psi = d.vectors[[0, 2], k]
        z = ztilde_truncated(g, (0, 2), lam)
        resid = np.linalg.norm(z.matrix @ psi - ztilde_eigen_target(lam, q) * psi)
        assert resid <= z.tail_norm + 1e-12
        # a perturbed eigenvalue must fail the same check
        off = lam + 1e-3
        z = ztilde_truncated(g, (0, 2), off)
        assert np.linalg.norm(z.matrix @ psi - ztilde_eigen_target(off, q) * psi) > 1e-8


def test_extension_recovers_eigenvector():
    g = path_graph(3)
    q = 100.0
    p = PotentialSpec.simple(3, (0, 2), q)
    d = spectrum(g, p)
    k = 0  # symmetric well state
    f_l = d.vectors[[0, 2], k]
    ext = extend_from_wells(g, p, f_l, d.values[k], K=20)
    assert np.allclose(ext.values, d.vectors[:, k], atol=1e-12)
    h = hamiltonian(g, p)
    resid = np.abs(h @ ext.values - d.values[k] * ext.values)[1]
    assert resid <= ext.residual_bound + 1e-12


def test_extension_linear():
    g = cycle_graph(6)
    p = PotentialSpec.simple(6, (0, 3), 50.0)
    lam = -60.0
    assert np.all(extend_from_wells(g, p, [0.0, 0.0], lam).values == 0)
    a = extend_from_wells(g, p, [1.0, -2.0], lam).values
    b = extend_from_wells(g, p, [3.0, -6.0], lam).values
    assert np.allclose(3 * a, b)
    with pytest.raises(ValueError):
        extend_from_wells(g, p, [1.0], lam)
