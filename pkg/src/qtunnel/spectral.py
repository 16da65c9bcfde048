"""Dense spectral layer: Laplacian, Hamiltonian, eigenpairs, closed-form evolution."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .graph import Graph

RESIDUAL_TOL = 1e-10
ORTHO_TOL = 1e-10
NORM_TOL = 1e-9


class SpectralError(RuntimeError):
    """Eigensolver failure or a decomposition that violates its invariants."""


@dataclass(frozen=True)
class PotentialSpec:
    """Vertex weights ``W`` (max exactly 1) and depth ``Q``; ``V = Q * W``."""

    weights: tuple[float, ...]
    depth: float = 0.0

    def __post_init__(self) -> None:
        w = tuple(float(x) for x in self.weights)
        if not w:
            raise ValueError("potential needs at least one vertex")
        if any(not 0.0 <= x <= 1.0 for x in w):
            raise ValueError("weights must lie in [0, 1]")
        if max(w) != 1.0:
            raise ValueError("the maximum weight must be exactly 1")
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "depth", float(self.depth))

    @classmethod
    def simple(cls, n: int, wells: Iterable[int], depth: float = 0.0) -> "PotentialSpec":
        w = [0.0] * n
        for v in wells:
            w[v] = 1.0
        return cls(tuple(w), depth)

    @classmethod
    def from_mapping(cls, n: int, weights: Mapping[int, float], depth: float = 0.0) -> "PotentialSpec":
        w = [0.0] * n
        for v, x in weights.items():
            if not 0 <= v < n:
                raise IndexError(f"vertex {v} out of range")
            w[v] = float(x)
        return cls(tuple(w), depth)

    @property
    def wells(self) -> tuple[int, ...]:
        return tuple(v for v, x in enumerate(self.weights) if x == 1.0)

    @property
    def is_simple(self) -> bool:
        return all(x in (0.0, 1.0) for x in self.weights)

    def with_depth(self, depth: float) -> "PotentialSpec":
        return PotentialSpec(self.weights, depth)


def symmetrized_laplacian(g: Graph) -> np.ndarray:
    deg = np.asarray(g.degree, dtype=float)
    lap = np.eye(g.n)
    for u, v in g.edges:
        val = -1.0 / np.sqrt(deg[u] * deg[v])
        lap[u, v] = val
        lap[v, u] = val
    return lap


def hamiltonian(g: Graph, p: PotentialSpec) -> np.ndarray:
    if len(p.weights) != g.n:
        raise ValueError(f"potential has {len(p.weights)} weights, graph has {g.n} vertices")
    h = symmetrized_laplacian(g)
    h[np.diag_indices(g.n)] -= p.depth * np.asarray(p.weights)
    return h


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues; ``vectors[:, k]`` is the k-th eigenvector."""

    values: np.ndarray
    vectors: np.ndarray
    clusters: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def n(self) -> int:
        return len(self.values)

    def vector(self, k: int) -> np.ndarray:
        return self.vectors[:, k]


def _fix_signs(vectors: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    vectors = vectors.copy()
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        nz = np.flatnonzero(np.abs(col) > tol)
        if nz.size and col[nz[0]] < 0:
            vectors[:, k] = -col
    return vectors


def eigenvalue_clusters(values: np.ndarray, scale: float, rel_gap: float = 1e-8) -> tuple[tuple[int, ...], ...]:
    """Group ascending eigenvalues whose consecutive gaps are below ``rel_gap*scale``."""
    groups: list[list[int]] = []
    for k, lam in enumerate(values):
        if groups and lam - values[groups[-1][-1]] < rel_gap * scale:
            groups[-1].append(k)
        else:
            groups.append([k])
    return tuple(tuple(gr) for gr in groups)


def eigendecompose(h: np.ndarray, check: bool = True) -> SpectralDecomposition:
    """Symmetric eigendecomposition (LAPACK tridiagonal reduction).

    Eigenvectors are sign-fixed: the first coordinate above 1e-12 in
    magnitude is positive. Residual and orthonormality invariants are
    checked; violating them raises rather than returning garbage.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("operator must be square")
    if not np.array_equal(h, h.T):
        raise ValueError("operator must be exactly symmetric")
    try:
        values, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigensolver did not converge: {exc}") from exc
    vectors = _fix_signs(vectors)
    norm = np.linalg.norm(h, 2) if h.size else 0.0
    if check:
        resid = np.linalg.norm(h @ vectors - vectors * values, axis=0)
        if resid.max(initial=0.0) > RESIDUAL_TOL * (1.0 + norm):
            raise SpectralError(f"eigenpair residual {resid.max():.3e} above tolerance")
        gram = vectors.T @ vectors
        if np.abs(gram - np.eye(len(values))).max(initial=0.0) > ORTHO_TOL:
            raise SpectralError("eigenvectors are not orthonormal to tolerance")
    return SpectralDecomposition(values, vectors, eigenvalue_clusters(values, max(norm, 1.0)))


def spectrum(g: Graph, p: PotentialSpec) -> SpectralDecomposition:
    return eigendecompose(hamiltonian(g, p))


def basis_state(n: int, x: int) -> np.ndarray:
    if not 0 <= x < n:
        raise IndexError(f"vertex {x} out of range")
    phi = np.zeros(n, dtype=complex)
    phi[x] = 1.0
    return phi


def evolve(d: SpectralDecomposition, phi0: np.ndarray, t: float) -> np.ndarray:
    """``phi_t = sum_k <psi_k, phi0> exp(i t lambda_k) psi_k``."""
    phi0 = np.asarray(phi0, dtype=complex)
    if abs(np.linalg.norm(phi0) - 1.0) > NORM_TOL:
        raise ValueError("initial state must have unit norm")
    coeffs = d.vectors.T @ phi0
    # global phase exp(i t lambda_1) dropped from relative phases, then restored;
    # this keeps the phase argument small for very negative eigenvalues
    shift = d.values[0] if d.n else 0.0
    phases = np.exp(1j * t * (d.values - shift)) * np.exp(1j * t * shift)
    return d.vectors @ (phases * coeffs)


def transfer_amplitude_weights(d: SpectralDecomposition, start: int, target: int) -> np.ndarray:
    """``psi_k(start) * psi_k(target)``: amplitude at ``target`` is sum_k w_k e^{i t lambda_k}."""
    return d.vectors[start, :] * d.vectors[target, :]


def transfer_probability(d: SpectralDecomposition, start: int, target: int, t) -> np.ndarray:
    """``|phi_t(target)|^2`` for a particle started at ``start``; vectorized in ``t``."""
    w = transfer_amplitude_weights(d, start, target)
    rel = d.values - d.values[0]
    t = np.asarray(t, dtype=float)
    amp = np.exp(1j * np.multiply.outer(t, rel)) @ w
    return np.abs(amp) ** 2


@dataclass(frozen=True)
class WellEigenpairs:
    indices: tuple[int, ...]
    masses: tuple[float, ...]
    q_too_small: bool


def well_eigenpairs(d: SpectralDecomposition, wells: Iterable[int], mass_threshold: float = 0.5) -> WellEigenpairs:
    """Eigenpairs with at least ``mass_threshold`` of their mass on the wells."""
    if not 0 < mass_threshold < 1:
        raise ValueError("mass_threshold must lie in (0, 1)")
    wells = sorted(set(wells))
    mass = (d.vectors[wells, :] ** 2).sum(axis=0)
    idx = tuple(int(k) for k in np.flatnonzero(mass >= mass_threshold))
    return WellEigenpairs(idx, tuple(float(mass[k]) for k in idx), len(idx) < len(wells))


def off_level_mass(d: SpectralDecomposition, weights: Iterable[float]) -> np.ndarray:
    """For each eigenvector i, its mass on vertices whose weight differs from
    the weight level paired with lambda_i (levels sorted in descending order)."""
    w = np.asarray(tuple(weights), dtype=float)
    levels = np.sort(w)[::-1]
    out = np.empty(d.n)
    for i in range(d.n):
        off = w != levels[i]
        out[i] = float((d.vectors[off, i] ** 2).sum())
    return out


def first_order_error(d: SpectralDecomposition, weights: Iterable[float], depth: float) -> float:
    """``max_i |lambda_i / Q + w_(i)|`` with weights sorted descending."""
    levels = np.sort(np.asarray(tuple(weights), dtype=float))[::-1]
    return float(np.max(np.abs(d.values / depth + levels)))
