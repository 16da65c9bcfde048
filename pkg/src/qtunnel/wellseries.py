"""Truncated walk series restricted to the wells.

Eigenfunctions of ``H = Delta - Q W`` are determined by their values on the
well set ``L``: off the wells they are recovered by summing weighted walks
into ``L``, and on the wells they must be fixed by the resulting
``|L| x |L|`` matrix. The infinite series are always truncated at a length
``K`` and paired with an explicit geometric tail bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .graph import Graph
from .spectral import PotentialSpec, symmetrized_laplacian
from .walks import transition_powers, symmetrize


class MarginError(ValueError):
    """``lambda`` is too close to a bulk resonance for the series to converge."""


def default_truncation(g: Graph) -> int:
    return 4 * g.diameter() + 8


@lru_cache(maxsize=64)
def well_series_coefficients(g: Graph, wells: tuple[int, ...], K: int) -> np.ndarray:
    """``C[k, i, j] = float(P_{w_i w_j}(k))`` for ``k = 0..K`` (``C[0] = 0``)."""
    table = transition_powers(g, K, wells)
    m = len(wells)
    out = np.zeros((K + 1, m, m))
    for k in range(1, K + 1):
        for i, v in enumerate(wells):
            for j, w in enumerate(wells):
                out[k, i, j] = float(symmetrize(g, v, w, table.entry(k, v, w)))
    return out


@dataclass(frozen=True)
class WellMatrix:
    wells: tuple[int, ...]
    matrix: np.ndarray
    K: int
    tail_bound: np.ndarray  # entrywise bound on the neglected remainder

    @property
    def tail_norm(self) -> float:
        """Frobenius norm of the entrywise bound: bounds the operator-norm error."""
        return float(np.linalg.norm(self.tail_bound))


def ztilde_truncated(g: Graph, wells: Sequence[int], lam: float, K: int | None = None) -> WellMatrix:
    """``sum_{k=1..K} P_vw(k) / (1 - lam)^k`` for wells ``v, w``."""
    wells = tuple(wells)
    if K is None:
        K = default_truncation(g)
    if K < 1:
        raise ValueError("K must be >= 1")
    if not lam < -1.0:
        raise MarginError(f"lambda={lam} outside the admissible range lambda < -1")
    t = 1.0 / (1.0 - lam)
    coeffs = well_series_coefficients(g, wells, K)
    powers = t ** np.arange(K + 1)
    mat = np.tensordot(powers, coeffs, axes=1)
    mat = (mat + mat.T) / 2  # exact symmetry; entries already agree to rounding
    deg = np.asarray([g.degree[v] for v in wells], dtype=float)
    tail = np.sqrt(np.outer(deg, deg)) * t ** (K + 1) / (1.0 - t)
    return WellMatrix(wells, mat, K, tail)


def ztilde_eigen_target(lam: float, depth: float) -> float:
    """The eigenvalue of the transformed matrix that certifies an eigenpair: ``1 - Q/(1-lam)``."""
    return 1.0 - depth / (1.0 - lam)


def _bulk_factors(g: Graph, p: PotentialSpec, lam: float, margin: float):
    w = np.asarray(p.weights)
    wells = np.asarray(p.wells)
    bulk = np.setdiff1d(np.arange(g.n), wells)
    denom = 1.0 - lam - p.depth * w
    if bulk.size and np.min(np.abs(denom[bulk])) < margin:
        raise MarginError(f"1 - lambda - Q W(x) within {margin} of zero off the wells")
    if np.any(denom[wells] == 0):
        raise MarginError("lambda coincides with the well resonance 1 - Q")
    gfac = 1.0 / denom
    rho = float(np.max(np.abs(gfac[bulk]))) if bulk.size else 0.0
    if rho >= 1.0:
        raise MarginError(f"walk series not certified: bulk ratio {rho:.3g} >= 1")
    return wells, bulk, gfac, rho


def _walk_terms(g: Graph, p: PotentialSpec, lam: float, K: int, margin: float):
    """``U[k]`` (n x |L|): weighted sum over length-k walks from each vertex into
    each well, interior off the wells. Built by the recurrence that prepends
    one vertex at a time."""
    wells, bulk, gfac, rho = _bulk_factors(g, p, lam, margin)
    a_sym = np.eye(g.n) - symmetrized_laplacian(g)
    terms = [gfac[:, None] * a_sym[:, wells]]
    for _ in range(K - 1):
        terms.append(gfac[:, None] * (a_sym[:, bulk] @ terms[-1][bulk, :]))
    return wells, bulk, gfac, rho, a_sym, terms


def z_general_truncated(g: Graph, p: PotentialSpec, lam: float, K: int | None = None,
                        margin: float = 1e-9) -> WellMatrix:
    if K is None:
        K = default_truncation(g)
    if K < 1:
        raise ValueError("K must be >= 1")
    wells, _, gfac, rho, _, terms = _walk_terms(g, p, lam, K, margin)
    mat = sum(u[wells, :] for u in terms)
    deg = np.asarray(g.degree, dtype=float)[wells]
    tail = (np.abs(gfac[wells])[:, None] * np.sqrt(np.outer(deg, deg))
            * rho ** K / (1.0 - rho))
    return WellMatrix(tuple(int(v) for v in wells), mat, K, tail)


@dataclass(frozen=True)
class Extension:
    values: np.ndarray
    residual_bound: float


def extend_from_wells(g: Graph, p: PotentialSpec, f_wells: Sequence[float], lam: float,
                      K: int | None = None, margin: float = 1e-9) -> Extension:
    """Extend values on the wells (ordered as ``p.wells``) to every vertex.

    Off the wells the truncated extension satisfies
    ``|(H f)(x) - lam f(x)| <= residual_bound``.
    """
    if K is None:
        K = default_truncation(g)
    f_wells = np.asarray(f_wells, dtype=float)
    wells, bulk, _, rho, a_sym, terms = _walk_terms(g, p, lam, K, margin)
    if f_wells.shape != (len(wells),):
        raise ValueError(f"expected {len(wells)} well values")
    f = np.zeros(g.n)
    f[wells] = f_wells
    if bulk.size:
        f[bulk] = sum(u[bulk, :] for u in terms) @ f_wells
        deg = np.asarray(g.degree, dtype=float)
        row = (a_sym[np.ix_(bulk, bulk)] @ np.sqrt(deg[bulk])).max()
        bound = rho ** K * row * np.sqrt(deg[wells].max()) * np.abs(f_wells).sum()
    else:
        bound = 0.0
    return Extension(f, float(bound))
