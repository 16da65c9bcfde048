from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtunnel.graph import complete_graph, cycle_graph, path_graph, star_graph
from qtunnel.spectral import (PotentialSpec, SpectralError, basis_state, eigendecompose, evolve,
                              first_order_error, hamiltonian, off_level_mass, spectrum,
                              symmetrized_laplacian, transfer_probability, well_eigenpairs)

from conftest import connected_graphs


def jacobi_eigenvalues(a: np.ndarray, sweeps: int = 60) -> np.ndarray:
    """Cyclic Jacobi rotations; independent of LAPACK's tridiagonal path."""
    a = np.array(a, dtype=float)
    n = len(a)
    for _ in range(sweeps):
        off = np.sqrt((np.tril(a, -1) ** 2).sum())
        if off < 1e-14 * max(1.0, np.abs(a).max()):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * a[p, q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q], rot[q, p] = s, -s
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))


@st.composite
def potentials(draw, n):
    w = draw(st.lists(st.sampled_from([0.0, 0.25, 0.5, 0.9]), min_size=n, max_size=n))
    w[draw(st.integers(0, n - 1))] = 1.0
    return PotentialSpec(tuple(w), draw(st.floats(0, 200)))


def test_laplacian_examples():
    assert np.array_equal(symmetrized_laplacian(path_graph(2)), [[1, -1], [-1, 1]])
    lap = symmetrized_laplacian(complete_graph(3))
    assert np.allclose(lap, np.eye(3) - 0.5 * (1 - np.eye(3)))
    assert symmetrized_laplacian(star_graph(3))[0, 1] == pytest.approx(-1 / math.sqrt(3))


def test_hamiltonian_examples():
    g = path_graph(2)
    q = 7.5
    assert np.array_equal(hamiltonian(g, PotentialSpec((1.0, 0.0), q)), [[1 - q, -1], [-1, 1]])
    assert np.array_equal(hamiltonian(g, PotentialSpec((1.0, 0.0), 0)), symmetrized_laplacian(g))
    c = cycle_graph(5)
    assert np.allclose(hamiltonian(c, PotentialSpec((1.0,) * 5, 3)), symmetrized_laplacian(c) - 3 * np.eye(5))
    with pytest.raises(ValueError):
        hamiltonian(c, PotentialSpec((1.0, 0.0), 1))


def test_potential_validation():
    with pytest.raises(ValueError):
        PotentialSpec((0.5, 0.2))
    with pytest.raises(ValueError):
        PotentialSpec((1.0, 1.2))
    with pytest.raises(ValueError):
        PotentialSpec((1.0, 0.0), -1)
    p = PotentialSpec.simple(4, [1, 3], 2.0)
    assert p.wells == (1, 3) and p.is_simple and p.with_depth(5).depth == 5


def test_eigen_examples():
    assert np.allclose(spectrum(path_graph(2), PotentialSpec((1.0, 0.0))).values, [0, 2])
    assert np.allclose(eigendecompose(symmetrized_laplacian(complete_graph(3))).values, [0, 1.5, 1.5])
    q = 10.0
    vals = spectrum(path_graph(2), PotentialSpec((1.0, 0.0), q)).values
    root = math.sqrt(q * q / 4 + 1)
    assert np.allclose(vals, [1 - q / 2 - root, 1 - q / 2 + root])


def test_eigendecompose_rejects_asymmetric():
    with pytest.raises(ValueError):
        eigendecompose(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_eigendecompose_flags_broken_solver(monkeypatch):
    def bad(h):
        return np.zeros(len(h)), np.eye(len(h)) * 2
    monkeypatch.setattr(np.linalg, "eigh", bad)
    with pytest.raises(SpectralError):
        eigendecompose(np.eye(2) + 1.0)


@given(connected_graphs(max_n=7), st.data())
def test_decomposition_matches_jacobi_oracle(g, data):
    p = data.draw(potentials(g.n))
    d = spectrum(g, p)
    assert np.allclose(d.values, jacobi_eigenvalues(hamiltonian(g, p)), atol=1e-9 * (1 + p.depth))
    for k in range(d.n):
        col = d.vectors[:, k]
        assert col[np.flatnonzero(np.abs(col) > 1e-12)[0]] > 0


@given(connected_graphs(max_n=7), st.data())
def test_evolution_unitary_and_group_law(g, data):
    p = data.draw(potentials(g.n))
    d = spectrum(g, p)
    t, s = data.draw(st.floats(0, 30)), data.draw(st.floats(0, 30))
    phi0 = basis_state(g.n, data.draw(st.integers(0, g.n - 1)))
    a = evolve(d, phi0, t)
    assert abs(np.linalg.norm(a) - 1) < 1e-9
    assert np.allclose(evolve(d, evolve(d, phi0, t), s), evolve(d, phi0, t + s), atol=1e-9)
    assert np.allclose(evolve(d, phi0, 0.0), phi0)
    # against the matrix exponential exp(i t H) via eigh-free scipy-free series check
    h = hamiltonian(g, p)
    small = 1e-3
    approx = phi0 + 1j * small * (h @ phi0) - 0.5 * small ** 2 * (h @ h @ phi0)
    assert np.allclose(evolve(d, phi0, small), approx, atol=1e-7 * (1 + p.depth) ** 3)


def test_two_level_closed_form():
    d = spectrum(path_graph(2), PotentialSpec((1.0, 0.0)))
    ts = np.linspace(0, 6, 50)
    assert np.allclose(transfer_probability(d, 0, 1, ts), np.sin(ts) ** 2)
    phi = np.array([evolve(d, basis_state(2, 0), t)[1] for t in ts])
    assert np.allclose(np.abs(phi) ** 2, np.sin(ts) ** 2)


def test_evolve_requires_unit_norm():
    d = spectrum(path_graph(2), PotentialSpec((1.0, 0.0)))
    with pytest.raises(ValueError):
        evolve(d, np.array([1.0, 1.0]), 0.3)


def test_well_eigenpairs_examples():
    d = spectrum(path_graph(2), PotentialSpec((1.0, 0.0), 100))
    assert well_eigenpairs(d, [0]).indices == (0,)
    d = spectrum(path_graph(3), PotentialSpec.simple(3, [0, 2], 100))
    pairs = well_eigenpairs(d, [0, 2])
    assert pairs.indices == (0, 1) and not pairs.q_too_small
    d = spectrum(cycle_graph(4), PotentialSpec.simple(4, [0], 0))
    assert well_eigenpairs(d, [0]).q_too_small


def test_first_order_asymptotics_descending_pairing():
    g = cycle_graph(5)
    w = (1.0, 0.0, 0.5, 0.0, 0.0)
    errs = [first_order_error(spectrum(g, PotentialSpec(w, q)), w, q) for q in (1e2, 1e3, 1e4)]
    assert errs[1] < errs[0] / 5 and errs[2] < errs[1] / 5
    mass = off_level_mass(spectrum(g, PotentialSpec(w, 1e4)), w)
    assert mass[0] < 1e-6 and mass[1] < 1e-6
