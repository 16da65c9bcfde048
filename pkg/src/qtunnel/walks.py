"""Exact walk sums on graphs.

Every quantity here is an exact rational (or a rational times a square
root). Walk weights with the symmetrized normalization are recovered from
the random-walk transition matrix ``T = D^-1 A`` through

    (A_sym^k)[v, w] = sqrt(d_v / d_w) * (T^k)[v, w],

so only rationals are ever multiplied.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exact import RadicalScalar
from .graph import Graph

Matrix = tuple[tuple[Fraction, ...], ...]


def shortest_distance(g: Graph, u: int, v: int) -> int:
    g.check_vertex(v)
    return g.distances_from(u)[v]


def default_k_cut(g: Graph) -> int:
    return 2 * g.diameter() + 2


@dataclass(frozen=True)
class WalkTable:
    """``powers[k][v][w]``: probability-weighted walk sums of length ``k``.

    Walk interiors (indices ``1..k-1``) avoid ``avoid``; endpoints are free.
    """

    avoid: frozenset[int]
    max_length: int
    powers: tuple[Matrix, ...]

    def entry(self, k: int, v: int, w: int) -> Fraction:
        return self.powers[k][v][w]


def transition_powers(g: Graph, K: int, avoid: Iterable[int] = ()) -> WalkTable:
    if K < 0:
        raise ValueError("K must be nonnegative")
    avoid = frozenset(g.check_vertex(v) for v in avoid)
    n = g.n
    inv_deg = [Fraction(1, d) for d in g.degree]
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    powers = [ident]
    # inner[k][u]: walks of length k from u whose vertices 0..k-1 avoid the set;
    # the current walk prepends its start vertex to such a tail.
    inner = [list(row) for row in ident]
    for _ in range(K):
        step = [
            [inv_deg[v] * sum((inner[u][w] for u in g.neighbors[v]), Fraction(0)) for w in range(n)]
            for v in range(n)
        ]
        powers.append(tuple(tuple(row) for row in step))
        inner = [
            step[v] if v not in avoid else [Fraction(0)] * n
            for v in range(n)
        ]
    return WalkTable(avoid, K, tuple(powers))


def return_probabilities(g: Graph, x: int, K: int) -> list[Fraction]:
    """``PR(x, k)`` for ``k = 0..K`` (unrestricted walks)."""
    g.check_vertex(x)
    inv_deg = [Fraction(1, d) for d in g.degree]
    # row vector e_x T^k
    row = [Fraction(0)] * g.n
    row[x] = Fraction(1)
    out = [row[x]]
    for _ in range(K):
        nxt = [Fraction(0)] * g.n
        for v, mass in enumerate(row):
            if mass:
                share = mass * inv_deg[v]
                for w in g.neighbors[v]:
                    nxt[w] += share
        row = nxt
        out.append(row[x])
    return out


def return_probability(g: Graph, x: int, k: int) -> Fraction:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return return_probabilities(g, x, k)[k]


@dataclass(frozen=True)
class Cospectrality:
    """Largest ``m <= k_cut`` with matching return probabilities up to ``m``.

    ``saturated`` means equality held all the way through ``k_cut``, so the
    true value is at least ``k_cut``.
    """

    value: int
    saturated: bool
    k_cut: int

    def at_least(self, m: int) -> bool:
        # a saturated value is only a lower bound, so m > k_cut is undecided (False)
        return self.value >= m

    def __str__(self) -> str:
        return f">={self.value}" if self.saturated else str(self.value)

    def to_json(self):
        return {"value": self.value, "saturated": self.saturated, "k_cut": self.k_cut}


def cospectrality(g: Graph, x: int, y: int, k_cut: int | None = None) -> Cospectrality:
    if x == y:
        raise ValueError("cospectrality needs two distinct vertices")
    if k_cut is None:
        k_cut = default_k_cut(g)
    px = return_probabilities(g, x, k_cut)
    py = return_probabilities(g, y, k_cut)
    for k in range(k_cut + 1):
        if px[k] != py[k]:
            return Cospectrality(k - 1, False, k_cut)
    return Cospectrality(k_cut, True, k_cut)


def geodesic_weights(g: Graph, u: int) -> tuple[list[int], list[Fraction]]:
    """BFS distances from ``u`` and, per vertex, the sum over geodesics from
    ``u`` of the product of ``1/d`` over every vertex but the last."""
    dist = g.distances_from(u)
    order = sorted(range(g.n), key=lambda v: dist[v])
    weight = [Fraction(0)] * g.n
    weight[u] = Fraction(1)
    for v in order:
        if v == u:
            continue
        weight[v] = sum(
            (weight[p] / g.degree[p] for p in g.neighbors[v] if dist[p] == dist[v] - 1),
            Fraction(0),
        )
    return dist, weight


def geodesic_coupling(g: Graph, u: int, v: int) -> RadicalScalar:
    """Sum over shortest ``u -> v`` paths of prod ``1/sqrt(d_j d_{j+1})``."""
    g.check_vertex(v)
    if u == v:
        raise ValueError("geodesic coupling needs two distinct vertices")
    _, weight = geodesic_weights(g, u)
    du, dv = g.degree[u], g.degree[v]
    return RadicalScalar(weight[v] / dv, du * dv)


def symmetrize(g: Graph, v: int, w: int, prob: Fraction) -> RadicalScalar:
    """``sqrt(d_v/d_w) * prob`` as an exact radical."""
    dv, dw = g.degree[v], g.degree[w]
    return RadicalScalar(prob / dw, dv * dw)


def well_walk_table(g: Graph, wells: Iterable[int], K: int) -> WalkTable:
    return transition_powers(g, K, wells)


def well_walk_sum(g: Graph, wells: Iterable[int], v: int, w: int, k: int,
                  table: WalkTable | None = None) -> RadicalScalar:
    """``P_vw(k)``: symmetrized weight of length-``k`` walks ``v -> w`` whose
    interior avoids the wells."""
    wells = frozenset(wells)
    if v not in wells or w not in wells:
        raise ValueError(f"both endpoints must be wells, got {v}, {w}")
    if k < 1:
        raise ValueError("k must be >= 1")
    if table is None or table.avoid != wells or table.max_length < k:
        table = transition_powers(g, k, wells)
    return symmetrize(g, v, w, table.entry(k, v, w))
