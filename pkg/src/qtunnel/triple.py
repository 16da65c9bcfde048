"""Triple-well predictions from the limiting well matrix ``M``.

Roles follow the convention ``a = d(x,y) <= b = d(x,z) <= c = d(y,z)``.
``M`` is the leading-order part of the well matrix after subtracting its
``(x, x)`` entry: off-diagonal couplings between wells at the minimal
distance ``a``, and on the diagonal the order-``a`` differences of return
sums (zero whenever the wells are ``2a``-cospectral).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import RadicalScalar, is_perfect_square, rational_sqrt
from .graph import Graph, find_automorphism
from .spectral import PotentialSpec, spectrum, well_eigenpairs
from .walks import (Cospectrality, cospectrality, default_k_cut, geodesic_coupling,
                    symmetrize, transition_powers)

ROLES = ("x", "y", "z")
PAIRS = ((0, 1), (0, 2), (1, 2))

NEAREST_PAIR_ONLY = "NearestPairOnly"
MIXED_FROM_APEX = "MixedFromApex"
APEX_PERFECT = "ApexMediated(perfect)"
APEX_BLOCKED = "ApexMediated(blocked)"
EQUILATERAL_PARTIAL = "EquilateralPartial"
EQUILATERAL_IRRATIONAL = "EquilateralIrrational"
EQUILATERAL_RATIONAL_SLOW = "EquilateralRationalSlow"
DEGENERATE = "Degenerate"

TIME_BASE = "Theta(Q^{a-1})"
TIME_SLOWER = "slower-than-Q^{a-1}"
TIME_AT_LEAST = "at-least-Q^a"
TIME_NA = "n/a"

ZERO = RadicalScalar(Fraction(0))


@dataclass(frozen=True)
class TripleWellGeometry:
    wells: tuple[int, int, int]          # vertex ids in role order (x, y, z)
    permutation: tuple[int, int, int]    # input position feeding each role
    a: int
    b: int
    c: int
    couplings: dict                      # (i, j) role pair -> RadicalScalar
    cospectrality: dict                  # (i, j) role pair -> Cospectrality
    return_diffs: tuple[tuple[Fraction, ...], ...]  # per role: P_uu(k) - P_xx(k), k = 1..a
    hypothesis_intro: bool               # pairwise c-cospectral
    hypothesis_2a: bool                  # pairwise 2a-cospectral

    @property
    def hypothesis_holds(self) -> bool:
        return self.hypothesis_intro and self.hypothesis_2a

    @property
    def leading_order_defined(self) -> bool:
        return all(d == 0 for diffs in self.return_diffs for d in diffs[:-1])

    @property
    def diagonal(self) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(diffs[-1] for diffs in self.return_diffs)

    def distance(self, i: int, j: int) -> int:
        i, j = min(i, j), max(i, j)
        return {(0, 1): self.a, (0, 2): self.b, (1, 2): self.c}[(i, j)]

    def coupling(self, i: int, j: int) -> RadicalScalar:
        return self.couplings[(min(i, j), max(i, j))]

    def role_of(self, v: int) -> int:
        return self.wells.index(v)


def _role_order(dist: dict, order: Sequence[int]) -> tuple[int, int, int]:
    for perm in itertools.permutations(range(3)):
        x, y, z = (order[i] for i in perm)
        if dist[x, y] <= dist[x, z] <= dist[y, z]:
            return perm
    raise AssertionError("unreachable: some labeling always sorts the distances")


def triple_geometry(g: Graph, x: int, y: int, z: int, k_cut: int | None = None) -> TripleWellGeometry:
    """Distances, couplings and cospectralities of three wells, relabeled so
    that ``a <= b <= c``; ties keep the input order."""
    order = (x, y, z)
    for v in order:
        g.check_vertex(v)
    if len(set(order)) != 3:
        raise ValueError("the three wells must be distinct")
    dist = {}
    for u in order:
        du = g.distances_from(u)
        for v in order:
            dist[u, v] = du[v]
    perm = _role_order(dist, order)
    wells = tuple(order[i] for i in perm)
    a, b, c = dist[wells[0], wells[1]], dist[wells[0], wells[2]], dist[wells[1], wells[2]]
    if k_cut is None:
        k_cut = default_k_cut(g)
    k_cut = max(k_cut, c, 2 * a)
    couplings = {(i, j): geodesic_coupling(g, wells[i], wells[j]) for i, j in PAIRS}
    cos = {(i, j): cospectrality(g, wells[i], wells[j], k_cut) for i, j in PAIRS}
    table = transition_powers(g, a, wells)
    ret = [[table.entry(k, w, w) for k in range(1, a + 1)] for w in wells]
    diffs = tuple(tuple(ret[r][k] - ret[0][k] for k in range(a)) for r in range(3))
    return TripleWellGeometry(
        wells, perm, a, b, c, couplings, cos, diffs,
        all(co.at_least(c) for co in cos.values()),
        all(co.at_least(2 * a) for co in cos.values()),
    )


# -- the limiting matrix ----------------------------------------------------

@dataclass(frozen=True)
class MMatrixReport:
    exact: tuple[tuple[object, ...], ...]   # Fractions on the diagonal, RadicalScalars off it
    M: np.ndarray
    mu: tuple[float, float, float]          # (mu_1, mu_2, mu_3) in the labeling used by gamma
    psi: np.ndarray                         # columns psi_1, psi_2, psi_3 in role coordinates
    degenerate: bool
    groups: tuple[tuple[float, np.ndarray], ...]  # (eigenvalue, projector) per distinct eigenvalue
    basis_note: str = ""

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.M, 2))


def _exact_entries(geom: TripleWellGeometry):
    diag = geom.diagonal
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            if i == j:
                row.append(diag[i])
            elif geom.distance(i, j) == geom.a:
                row.append(geom.coupling(i, j))
            else:
                row.append(ZERO)
        rows.append(tuple(row))
    return tuple(rows)


def _groups(values: np.ndarray, vectors: np.ndarray, tol: float):
    groups = []
    k = 0
    while k < len(values):
        j = k + 1
        while j < len(values) and values[j] - values[j - 1] < tol:
            j += 1
        v = vectors[:, k:j]
        groups.append((float(values[k:j].mean()), v @ v.T))
        k = j
    return tuple(groups)


def m_matrix(geom: TripleWellGeometry) -> MMatrixReport:
    return m_from_entries(_exact_entries(geom))


def m_from_couplings(c_xy, c_xz, c_yz, diagonal=(0, 0, 0)) -> MMatrixReport:
    """Limiting matrix from explicit couplings (zero entries for non-minimal pairs)."""
    c = [x if isinstance(x, RadicalScalar) else RadicalScalar(Fraction(x)) for x in (c_xy, c_xz, c_yz)]
    d = [Fraction(x) for x in diagonal]
    return m_from_entries(((d[0], c[0], c[1]), (c[0], d[1], c[2]), (c[1], c[2], d[2])))


def m_from_entries(exact) -> MMatrixReport:
    M = np.array([[float(e) for e in row] for row in exact])
    norm = float(np.linalg.norm(M, 2))
    values, vectors = np.linalg.eigh(M)
    groups = _groups(values, vectors, 1e-12 * max(norm, 1e-300))
    degenerate = len(groups) < 3
    note = ""
    cxy, cxz, cyz = exact[0][1], exact[0][2], exact[1][2]
    all_equal = (cxy == cxz == cyz and cxy.coeff != 0
                 and all(exact[i][i] == 0 for i in range(3)))
    if all_equal:
        psi = np.column_stack([
            np.array([1.0, 1.0, 1.0]) / math.sqrt(3),
            np.array([-2.0, 1.0, 1.0]) / math.sqrt(6),
            np.array([0.0, 1.0, -1.0]) / math.sqrt(2),
        ])
        c = float(cxy)
        mu = (2 * c, -c, -c)
        note = "equal couplings: basis (1,1,1), (-2,1,1), (0,1,-1)"
    else:
        # psi_3 is the eigenvector vanishing (or nearly) at x; mu_1 the larger of the rest
        k3 = int(np.argmin(np.abs(vectors[0, :])))
        k1, k2 = sorted((k for k in range(3) if k != k3), key=lambda k: -values[k])
        psi = vectors[:, [k1, k2, k3]].copy()
        for k in range(3):
            col = psi[:, k]
            nz = np.flatnonzero(np.abs(col) > 1e-12)
            if nz.size and col[nz[0]] < 0:
                psi[:, k] = -col
        mu = (float(values[k1]), float(values[k2]), float(values[k3]))
        if degenerate:
            note = "repeated eigenvalue: individual eigenvectors are not determined"
    return MMatrixReport(tuple(tuple(r) for r in exact), M, mu, psi, degenerate, groups, note)


def characteristic_polynomial(report: MMatrixReport) -> tuple:
    """Exact coefficients of ``det(t I - M)``, leading first.

    Raises ValueError when the determinant mixes incompatible radicals.
    """
    m = report.exact
    d0, d1, d2 = (Fraction(m[i][i]) for i in range(3))
    c01, c02, c12 = m[0][1], m[0][2], m[1][2]
    trace = d0 + d1 + d2
    minors = d0 * d1 + d0 * d2 + d1 * d2 - c01.square() - c02.square() - c12.square()
    det = (RadicalScalar(d0 * d1 * d2) + 2 * (c01 * c02 * c12)
           - RadicalScalar(d0 * c12.square() + d1 * c02.square() + d2 * c01.square()))
    return (Fraction(1), -trace, minors, -det)


def depressed_discriminant(report: MMatrixReport) -> Fraction:
    """Discriminant ``-4p^3 - 27q^2`` of ``t^3 + p t + q`` for a zero-diagonal ``M``."""
    if any(report.exact[i][i] != 0 for i in range(3)):
        raise ValueError("only defined for zero diagonal")
    _, _, p, q = characteristic_polynomial(report)
    return -4 * p ** 3 - 27 * q.square()


# -- exact arithmetic diagnostics --------------------------------------------

@dataclass(frozen=True)
class RationalityVerdict:
    rational: bool
    value: Fraction             # c_yz^2 + 8 c_xz^2
    numerator_root: int | None
    denominator_root: int | None

    def to_json(self) -> dict:
        return {"rational": self.rational, "value": str(self.value),
                "numerator": self.value.numerator, "denominator": self.value.denominator,
                "numerator_root": self.numerator_root, "denominator_root": self.denominator_root}


def radical_is_rational(c_yz: RadicalScalar | Fraction | int, c_xz: RadicalScalar | Fraction | int) -> RationalityVerdict:
    """Decide exactly whether ``sqrt(c_yz^2 + 8 c_xz^2)`` is rational."""
    sq = [x.square() if isinstance(x, RadicalScalar) else Fraction(x) ** 2 for x in (c_yz, c_xz)]
    value = sq[0] + 8 * sq[1]
    num, den = value.numerator, value.denominator
    ok = is_perfect_square(num) and is_perfect_square(den)
    return RationalityVerdict(ok, value, math.isqrt(num) if ok else None,
                              math.isqrt(den) if ok else None)


def odd_over_even(q: Fraction | int) -> bool:
    q = Fraction(q)
    return q.numerator % 2 == 1 and q.denominator % 2 == 0


@dataclass(frozen=True)
class GammaResult:
    value: float
    exact: Fraction | str | None  # a string for irrational closed forms
    rational: bool | None
    odd_over_even: bool | None
    method: str

    def to_json(self) -> dict:
        ex = self.exact
        return {"value": self.value,
                "exact": None if ex is None else str(ex),
                "rational": self.rational, "odd_over_even": self.odd_over_even,
                "method": self.method}


class GammaUndefined(ValueError):
    pass


def _half_plus(term: RadicalScalar, method: str) -> GammaResult:
    if term.is_rational:
        q = term.to_fraction() + Fraction(1, 2)
        return GammaResult(float(q), q, True, odd_over_even(q), method)
    return GammaResult(0.5 + float(term), f"1/2 + {term}", False, False, method)


def gamma_of(report: MMatrixReport) -> GammaResult:
    """``gamma = (mu_1 - mu_3) / (mu_1 - mu_2)``, exact when a closed form applies."""
    mu1, mu2, mu3 = report.mu
    if abs(mu1 - mu2) <= 1e-12 * max(report.norm, 1e-300):
        raise GammaUndefined("mu_1 = mu_2: gamma undefined")
    value = (mu1 - mu3) / (mu1 - mu2)
    m = report.exact
    d = [Fraction(m[i][i]) for i in range(3)]
    cxy, cxz, cyz = m[0][1], m[0][2], m[1][2]
    if report.basis_note.startswith("equal couplings"):
        return GammaResult(1.0, Fraction(1), True, False, "equal-couplings basis")
    if cxy == cxz and d[1] == d[2] and cxy.coeff != 0:
        # y <-> z symmetric: (0,1,-1) has eigenvalue d_y - c_yz; the other two
        # solve [[d_x, sqrt2 c_xy], [sqrt2 c_xy, d_y + c_yz]].
        delta = d[0] - d[1]
        try:
            half_gap = (RadicalScalar(delta) + 3 * cyz) / 2    # T/2 - mu_3
            disc = (RadicalScalar(delta) - cyz).square() + 8 * cxy.square()
        except ValueError:
            return GammaResult(value, None, None, None, "numeric (mixed radicals)")
        if disc == 0:
            raise GammaUndefined("mu_1 = mu_2: gamma undefined")
        root = RadicalScalar.sqrt_of(disc)
        if half_gap.coeff == 0:
            return GammaResult(0.5, Fraction(1, 2), True, True, "y-z symmetric closed form")
        return _half_plus(half_gap / root, "y-z symmetric closed form")
    zero_diag = all(x == 0 for x in d)
    if zero_diag and cyz.coeff == 0:
        # a = b < c (or a < b with one coupling): spectrum {-r, 0, r}
        return GammaResult(0.5, Fraction(1, 2), True, True, "star closed form")
    return GammaResult(value, None, None, None, "numeric")


# -- phase alignment -----------------------------------------------------------

@dataclass(frozen=True)
class PhaseSearch:
    T: float
    eps: float
    found_t: float | None
    lattice_distance: float | None
    checked: int

    def to_json(self) -> dict:
        return {"T": self.T, "eps": self.eps, "found_t": self.found_t,
                "lattice_distance": self.lattice_distance, "checked": self.checked}


def _lattice_distance(X: float, Y: float, cap: int) -> float | None:
    """Distance from the segment (0,0)-(X,Y) to {(even, odd)}."""
    swap = abs(Y) > abs(X)
    if swap:
        X, Y = Y, X
    hi = abs(X) + 2
    # enumerate the lattice coordinate along the long axis; parity depends on swap
    first = 1 if swap else 0
    ks = np.arange(first, hi + 2, 2.0)
    ks = np.unique(np.concatenate([ks, -ks, ks - 2]))
    if ks.size > cap:
        return None
    along = ks
    line = along * (Y / X) if X != 0 else np.zeros_like(along)
    par = 0 if swap else 1  # parity wanted on the short axis
    base = np.floor(line)
    cands = []
    for off in (-2, -1, 0, 1, 2):
        v = base + off
        cands.append(np.where(np.mod(v, 2) == par, v, np.nan))
    best = math.inf
    seg = np.array([X, Y])
    L2 = float(seg @ seg)
    for cq in cands:
        pts = np.stack([along, cq], axis=1)
        ok = ~np.isnan(cq)
        if not ok.any():
            continue
        pts = pts[ok]
        s = np.clip(pts @ seg / L2, 0.0, 1.0) if L2 > 0 else np.zeros(len(pts))
        dist = np.linalg.norm(pts - s[:, None] * seg, axis=1)
        best = min(best, float(dist.min()))
    return best


def phase_alignment_search(l1: float, l2: float, l3: float, T: float, eps: float,
                           cap: int = 20_000_000) -> PhaseSearch:
    """Smallest ``t in [0, T]`` with ``|e^{it(l1-l2)} - 1| <= eps`` and
    ``|e^{it(l1-l3)} + 1| <= eps``, plus the distance (in units of pi) from
    the curve ``t -> t (l1-l2, l1-l3) / pi`` to the lattice {(even, odd)}."""
    if T <= 0 or eps <= 0:
        raise ValueError("T and eps must be positive")
    d12, d13 = l1 - l2, l1 - l3
    if d12 == 0 or d13 == 0:
        raise ValueError("lambda_1 must differ from lambda_2 and lambda_3")
    half = 2 * math.asin(min(eps / 2, 1.0))
    n_k = int(math.floor(T * abs(d12) / (2 * math.pi))) + 1
    if n_k > cap:
        raise ValueError(f"search needs {n_k} candidates (cap {cap})")
    found = None
    rate = abs(d13)
    for s in range(0, n_k, 1_000_000):
        k = np.arange(s, min(n_k, s + 1_000_000), dtype=float)
        centre = 2 * math.pi * k / abs(d12)
        lo = np.maximum(centre - half / abs(d12), 0.0)
        hi = np.minimum(centre + half / abs(d12), T)
        # phase of the second condition, folded so it increases with t
        p_lo, p_hi = lo * rate, hi * rate
        m = np.ceil((p_lo - half - math.pi) / (2 * math.pi))
        target = np.maximum(p_lo, math.pi * (2 * m + 1) - half)
        ok = (target <= p_hi) & (lo <= hi)
        if ok.any():
            i = int(np.flatnonzero(ok)[0])
            found = float(lo[i] + (target[i] - p_lo[i]) / rate)
            break
    dist = _lattice_distance(T * d12 / math.pi, T * d13 / math.pi, cap)
    return PhaseSearch(T, eps, found, dist, n_k)


# -- limiting transfer ----------------------------------------------------------

def _orbit_sup(weights: Sequence[float], f2: float, f3: float, period: float) -> float:
    """sup over s in [0, period] of |w1 + w2 e^{i s f2} + w3 e^{i s f3}|^2."""
    w = np.asarray(weights, dtype=float)
    freqs = np.array([0.0, f2, f3])
    n = 20000 + int(period * max(abs(f2), abs(f3)) / (2 * math.pi)) * 200
    s = np.linspace(0.0, period, n)
    vals = np.abs(np.exp(1j * np.outer(s, freqs)) @ w) ** 2
    best = float(vals.max())
    h = s[1] - s[0]
    i = int(vals.argmax())
    lo, hi = max(s[i] - h, 0.0), min(s[i] + h, period)
    gr = (math.sqrt(5) - 1) / 2
    for _ in range(60):
        c, d = hi - gr * (hi - lo), lo + gr * (hi - lo)
        fc = abs(np.exp(1j * c * freqs) @ w) ** 2
        fd = abs(np.exp(1j * d * freqs) @ w) ** 2
        if fc >= fd:
            hi = d
        else:
            lo = c
        best = max(best, fc, fd)
    return min(best, 1.0)


def limit_transfer(report: MMatrixReport, gamma: GammaResult | None, u: int, v: int) -> tuple[float | None, str]:
    """Predicted sup transfer between roles ``u -> v`` from the limiting eigenstructure."""
    weights = [float(P[u, v]) for _, P in report.groups]
    live = [(mu, w) for (mu, _), w in zip(report.groups, weights) if abs(w) > 1e-12]
    total = sum(abs(w) for _, w in live) ** 2
    if len(live) <= 2:
        return float(min(total, 1.0)), "two-frequency"
    if gamma is None or gamma.rational is None:
        return None, "frequency ratio not decided exactly"
    if not gamma.rational:
        return float(min(total, 1.0)), "incommensurate frequencies"
    mus = [mu for mu, _ in live]
    f2, f3 = mus[1] - mus[0], mus[2] - mus[0]
    # every ratio of eigenvalue gaps is a rational function of gamma, hence rational here
    ratio = Fraction(f3 / f2).limit_denominator(10_000)
    period = 2 * math.pi * ratio.denominator / abs(f2)
    return float(_orbit_sup([w for _, w in live], f2, f3, period)), "commensurate orbit"


# -- classification ------------------------------------------------------------------

@dataclass(frozen=True)
class TripleRegime:
    tag: str
    start: int
    target: int
    geometry: TripleWellGeometry
    m: MMatrixReport | None
    gamma: GammaResult | None
    rationality: RationalityVerdict | None
    tc_table: dict                 # (u, v) vertex ids -> float | None
    time_scale: str
    perfect: bool | None = None
    mixed_distribution: dict | None = None
    phase_search: PhaseSearch | None = None
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        geom = self.geometry
        role = {v: ROLES[i] for i, v in enumerate(geom.wells)}
        return {
            "kind": "triple-well",
            "tag": self.tag,
            "start": self.start,
            "target": self.target,
            "roles": {ROLES[i]: v for i, v in enumerate(geom.wells)},
            "permutation": list(geom.permutation),
            "distances": {"a": geom.a, "b": geom.b, "c": geom.c},
            "couplings": {f"c_{ROLES[i]}{ROLES[j]}": geom.coupling(i, j).to_json() for i, j in PAIRS},
            "cospectrality": {f"{ROLES[i]}{ROLES[j]}": geom.cospectrality[(i, j)].to_json() for i, j in PAIRS},
            "hypothesis": {"pairwise_c_cospectral": geom.hypothesis_intro,
                           "pairwise_2a_cospectral": geom.hypothesis_2a},
            "diagonal_offsets": [str(d) for d in geom.diagonal],
            "M": None if self.m is None else self.m.M.tolist(),
            "mu": None if self.m is None else list(self.m.mu),
            "m_degenerate": None if self.m is None else self.m.degenerate,
            "gamma": None if self.gamma is None else self.gamma.to_json(),
            "rationality_witness": None if self.rationality is None else self.rationality.to_json(),
            "tc_table": [{"from": u, "to": v, "from_role": role[u], "to_role": role[v], "tc": tc}
                         for (u, v), tc in sorted(self.tc_table.items())],
            "time_scale": self.time_scale,
            "perfect": self.perfect,
            "mixed_distribution": None if self.mixed_distribution is None else
            {str(k): str(v) for k, v in self.mixed_distribution.items()},
            "phase_search": None if self.phase_search is None else self.phase_search.to_json(),
            "notes": list(self.notes),
        }


def _tc_table(geom: TripleWellGeometry, report: MMatrixReport, gamma: GammaResult | None) -> dict:
    table = {}
    for i in range(3):
        for j in range(3):
            if i != j:
                tc, _ = limit_transfer(report, gamma, i, j)
                table[geom.wells[i], geom.wells[j]] = tc
    return table


def _order3_symmetric(g: Graph, wells: tuple[int, int, int]) -> bool:
    x, y, z = wells
    return find_automorphism(g, {x: y, y: z, z: x}) is not None


def _yz_involution(g: Graph, wells: tuple[int, int, int]) -> bool:
    x, y, z = wells
    return find_automorphism(g, {x: x, y: z, z: y}) is not None


def classify_triple_well(g: Graph, wells: Sequence[int], start: int, target: int | None = None,
                         k_cut: int | None = None, eps: float = 1e-2) -> TripleRegime:
    """Case split by the well distances, then the limiting eigenstructure.

    Outside the pairwise ``max(c, 2a)``-cospectral hypothesis the limiting
    matrix still exists as long as no diagonal difference appears below order
    ``a``; it then carries exact diagonal entries and the classification is
    reported with a note. Otherwise the result is ``Degenerate``.
    """
    wells = tuple(wells)
    if len(wells) != 3 or len(set(wells)) != 3:
        raise ValueError("need three distinct wells")
    if start not in wells:
        raise ValueError("start must be one of the wells")
    others = sorted(w for w in wells if w != start)
    if target is None:
        target = others[0]
    if target not in others:
        raise ValueError("target must be another well")
    third = next(w for w in others if w != target)

    dist = {(u, v): g.distances_from(u)[v] for u in wells for v in wells}
    a, _, c = sorted([dist[wells[0], wells[1]], dist[wells[0], wells[2]], dist[wells[1], wells[2]]])
    # equilateral triangles are labeled by the query: x = third, y = start, z = target
    order = (third, start, target) if a == c else tuple(sorted(wells))
    geom = triple_geometry(g, *order, k_cut=k_cut)
    notes: list[str] = []
    if not geom.hypothesis_holds:
        notes.append(
            "outside the pairwise max(c, 2a)-cospectral hypothesis "
            f"(c-cospectral: {geom.hypothesis_intro}, 2a-cospectral: {geom.hypothesis_2a})")
    if not geom.leading_order_defined:
        notes.append("a return-sum difference appears below order a: the limiting matrix does not exist")
        return TripleRegime(DEGENERATE, start, target, geom, None, None, None,
                            {}, TIME_NA, None, None, None, tuple(notes))
    if any(d != 0 for d in geom.diagonal):
        notes.append("limiting matrix carries order-a diagonal corrections: "
                     + ", ".join(str(d) for d in geom.diagonal))

    report = m_matrix(geom)
    try:
        gamma = gamma_of(report)
    except GammaUndefined:
        gamma = None
    table = _tc_table(geom, report, gamma)
    cxy, cxz, cyz = (geom.coupling(i, j) for i, j in PAIRS)
    verdict = radical_is_rational(cyz, cxz) if a == c else None
    s_role = geom.role_of(start)
    zero_diag = all(d == 0 for d in geom.diagonal)
    mixed = None
    time_scale = TIME_BASE

    if geom.a < geom.b:
        tag = NEAREST_PAIR_ONLY
    elif geom.b < geom.c:
        if s_role == 0:
            tag = MIXED_FROM_APEX
            if zero_diag:
                r2 = cxy.square() + cxz.square()
                mixed = {geom.wells[1]: cxy.square() / r2, geom.wells[2]: cxz.square() / r2}
        else:
            tag = APEX_PERFECT if cxy == cxz and zero_diag else APEX_BLOCKED
            if tag == APEX_BLOCKED:
                notes.append("couplings to the apex differ: transfer between the far wells is partial")
    else:
        # equilateral; x is the third well
        if not (cxy == cxz and geom.diagonal[1] == geom.diagonal[2]):
            tag = EQUILATERAL_PARTIAL
        elif report.degenerate:
            tag = EQUILATERAL_RATIONAL_SLOW
            time_scale = TIME_AT_LEAST
            if _order3_symmetric(g, geom.wells):
                table = {k: 4 / 9 for k in table}
                notes.append("an order-three automorphism permutes the wells: transfer limited to 4/9")
            elif _yz_involution(g, geom.wells) and not geom.cospectrality[(0, 1)].saturated:
                table[start, target] = 1.0
                notes.append("an involution swaps y and z while the return sums of x and y differ: "
                             "the repeated eigenvalue splits at finite depth and transfer y -> z "
                             "becomes perfect beyond order Q^a")
            else:
                table[start, target] = None
                notes.append("repeated eigenvalue with undetermined splitting: no verdict")
        elif gamma is not None and gamma.rational is False:
            tag = EQUILATERAL_IRRATIONAL
            time_scale = TIME_SLOWER
            table[start, target] = 1.0
        elif gamma is not None and gamma.rational and gamma.odd_over_even:
            tag = EQUILATERAL_RATIONAL_SLOW
            table[start, target] = 1.0
            notes.append(f"gamma = {gamma.exact} is odd-over-even: the alignment lattice is reached")
        else:
            tag = EQUILATERAL_RATIONAL_SLOW
            time_scale = TIME_AT_LEAST
            bound = table[start, target]
            table[start, target] = None
            if gamma is not None and gamma.rational:
                notes.append(f"rational gamma = {gamma.exact}, not odd-over-even: within o(Q^a) "
                             f"the transfer stays at most {bound:.6f}; beyond that no verdict")
            else:
                notes.append("gamma not decided in closed form: no verdict")
    tc = table.get((start, target))
    perfect = None if tc is None else tc >= 1 - 1e-9
    if tag == APEX_BLOCKED:
        perfect = False

    phase = None
    if report is not None and not report.degenerate:
        mu1, mu2, mu3 = report.mu
        if len({round(m, 14) for m in report.mu}) == 3:
            span = max(abs(mu1 - mu2), 1e-300)
            try:
                phase = phase_alignment_search(mu1, mu2, mu3, 2 * math.pi * 64 / span, eps)
            except ValueError:
                phase = None
    return TripleRegime(tag, start, target, geom, report, gamma, verdict, table, time_scale,
                        perfect, mixed, phase, tuple(notes))


# -- finite-depth diagnostics ---------------------------------------------------------

@dataclass(frozen=True)
class RatioDiagnostic:
    schedule: tuple[float, ...]
    ratios: tuple[float, ...]
    gamma: float | None
    max_deviation: float | None
    eigvec_drift: tuple[float, ...]


def finite_depth_ratio(g: Graph, regime: TripleRegime, schedule: Sequence[float]) -> RatioDiagnostic:
    """``(lambda_1 - lambda_3)/(lambda_1 - lambda_2)`` of the three well
    eigenvalues along a depth schedule, matched to the labels of ``M``."""
    geom = regime.geometry
    report = regime.m
    wells = list(geom.wells)
    ratios, drift = [], []
    for q in schedule:
        dec = spectrum(g, PotentialSpec.simple(g.n, wells, q))
        idx = well_eigenpairs(dec, wells).indices
        if len(idx) != 3 or report is None:
            ratios.append(math.nan)
            drift.append(math.nan)
            continue
        vecs = dec.vectors[np.ix_(wells, idx)]
        vecs /= np.linalg.norm(vecs, axis=0)
        overlap = np.abs(report.psi.T @ vecs)
        match = [int(np.argmax(overlap[k])) for k in range(3)]
        if len(set(match)) < 3:
            ratios.append(math.nan)
            drift.append(math.nan)
            continue
        lam = [dec.values[idx[m]] for m in match]
        ratios.append(float((lam[0] - lam[2]) / (lam[0] - lam[1])))
        drift.append(float(max(1 - overlap[k, match[k]] for k in range(3))))
    gam = regime.gamma.value if regime.gamma is not None else None
    finite = [r for r in ratios if not math.isnan(r)]
    dev = max(abs(r - gam) for r in finite) if finite and gam is not None else None
    return RatioDiagnostic(tuple(schedule), tuple(ratios), gam, dev, tuple(drift))
