"""Tunneling measurements and the double-well classifier."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import RadicalScalar
from .graph import Graph
from .spectral import PotentialSpec, SpectralDecomposition, spectrum, well_eigenpairs
from .walks import Cospectrality, cospectrality, default_k_cut, shortest_distance, well_walk_sum


class WindowError(RuntimeError):
    """The time window needs more grid points than the configured cap."""


class InsufficientDataError(ValueError):
    pass


class EigenpairIdentificationError(RuntimeError):
    pass


DEFAULT_SCHEDULE = (1e2, 10 ** 2.5, 1e3)


@dataclass(frozen=True)
class SweepConfig:
    """How the sup over time and the sweep over depth are carried out.

    ``window_exp=None`` means "use d(start, target) - 1".
    """

    q_schedule: tuple[float, ...] = DEFAULT_SCHEDULE
    window_exp: float | None = None
    window_const: float = 32.0
    coarse_steps: int = 2000
    refine_iters: int = 48
    tie_tol: float = 1e-3
    amp_tol: float = 1e-4
    max_grid: int = 20_000_000
    max_candidates: int = 4096
    usefulness_floor: float = 0.5
    workers: int = 1

    def __post_init__(self) -> None:
        qs = tuple(float(q) for q in self.q_schedule)
        if not qs:
            raise ValueError("empty Q schedule")
        if any(b <= a for a, b in zip(qs, qs[1:])):
            raise ValueError("Q schedule must be strictly ascending")
        if qs[0] < 0:
            raise ValueError("Q schedule must be nonnegative")
        object.__setattr__(self, "q_schedule", qs)

    def window(self, q: float, exponent: float) -> float:
        return self.window_const * q ** exponent


@dataclass(frozen=True)
class TunnelingEstimate:
    Q: float
    sup_prob: float
    argmax_t: float
    window_T: float
    grid_step: float = math.nan
    grid_points: int = 0
    dropped_weight: float = 0.0
    gap: float = math.nan

    @property
    def pi_over_gap(self) -> float:
        return math.pi / self.gap if self.gap and not math.isnan(self.gap) else math.nan


def _golden_max(f, lo: np.ndarray, hi: np.ndarray, iters: int):
    """Vectorized golden-section maximization over independent intervals."""
    r = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo.copy(), hi.copy()
    c = b - r * (b - a)
    d = a + r * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        left = fc >= fd
        # keep [a, d] where f(c) wins, [c, b] otherwise
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - r * (b - a)
        new_d = a + r * (b - a)
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        fc_next = np.where(left, np.nan, fd)
        fd_next = np.where(left, fc, np.nan)
        need_c = np.isnan(fc_next)
        need_d = np.isnan(fd_next)
        if need_c.any():
            fc_next[need_c] = f(c_next[need_c])
        if need_d.any():
            fd_next[need_d] = f(d_next[need_d])
        c, d, fc, fd = c_next, d_next, fc_next, fd_next
    t = np.where(fc >= fd, c, d)
    return t, np.maximum(fc, fd)


def sup_transfer(d: SpectralDecomposition, start: int, target: int, T: float,
                 cfg: SweepConfig | None = None, Q: float = math.nan) -> TunnelingEstimate:
    """Lower bound on ``sup_{t in [0,T]} |phi_t(target)|^2`` from ``phi_0 = chi_start``.

    The coarse grid runs over the components carrying all but ``amp_tol`` of
    the transfer weight ``sum_k |psi_k(start) psi_k(target)|``; its step is
    at most a tenth of the fastest period among them. Every grid peak that
    could hide the global maximum is then refined by golden section on the
    full amplitude. ``argmax_t`` is the earliest refined peak within
    ``tie_tol`` of the sup.
    """
    cfg = cfg or SweepConfig()
    if not T > 0:
        raise ValueError("window T must be positive")
    w_all = d.vectors[start, :] * d.vectors[target, :]
    rel_all = d.values - d.values[0]

    order = np.argsort(np.abs(w_all))
    cum = np.cumsum(np.abs(w_all[order]))
    n_drop = int(np.searchsorted(cum, cfg.amp_tol, side="right"))
    n_drop = min(n_drop, len(order) - 1)
    keep = np.sort(order[n_drop:])
    dropped = float(cum[n_drop - 1]) if n_drop else 0.0
    w = w_all[keep]
    rel = rel_all[keep] - rel_all[keep].min()
    spread = float(rel.max())

    def full(t):
        return np.abs(np.exp(1j * np.multiply.outer(t, rel_all)) @ w_all) ** 2

    if spread == 0.0:
        val = float(full(np.array([0.0]))[0])
        return TunnelingEstimate(Q, val, 0.0, T, T, 1, dropped, _dominant_gap(d, w_all))

    h = T / max(cfg.coarse_steps, 1)
    h = min(h, 0.1 * 2 * math.pi / spread)
    n_grid = int(math.ceil(T / h)) + 1
    if n_grid > cfg.max_grid:
        raise WindowError(f"window needs {n_grid} grid points (cap {cfg.max_grid})")
    grid = np.minimum(np.arange(n_grid) * h, T)

    vals = np.empty(n_grid)
    chunk = max(1, 2_000_000 // len(w))
    for s in range(0, n_grid, chunk):
        ts = grid[s:s + chunk]
        vals[s:s + chunk] = np.abs(np.exp(1j * np.multiply.outer(ts, rel)) @ w) ** 2

    s_abs = float(np.abs(w).sum())
    # how far a true peak can rise above its neighbouring grid samples, plus truncation
    margin = 0.5 * (s_abs * spread * h) ** 2 + 2.0 * dropped * s_abs + dropped ** 2 + 1e-12
    gmax = float(vals.max())
    padded = np.concatenate(([-np.inf], vals, [-np.inf]))
    is_peak = (vals >= padded[:-2]) & (vals >= padded[2:])
    cand = np.flatnonzero(is_peak & (vals >= gmax - margin))
    if cand.size > cfg.max_candidates:
        top = np.argsort(vals[cand])[::-1][: cfg.max_candidates]
        cand = np.sort(cand[top])

    lo = np.maximum(grid[cand] - h, 0.0)
    hi = np.minimum(grid[cand] + h, T)
    t_ref, v_ref = _golden_max(full, lo, hi, cfg.refine_iters)
    v_grid = full(grid[cand])
    better = v_grid > v_ref
    t_ref = np.where(better, grid[cand], t_ref)
    v_ref = np.where(better, v_grid, v_ref)

    sup = float(min(v_ref.max(), 1.0))
    first = int(np.flatnonzero(v_ref >= sup - cfg.tie_tol)[0])
    return TunnelingEstimate(Q, sup, float(t_ref[first]), T, h, n_grid, dropped,
                             _dominant_gap(d, w_all))


@dataclass(frozen=True)
class MixtureEstimate:
    t: float
    probs: tuple[float, ...]
    window_T: float

    @property
    def worst(self) -> float:
        return min(self.probs)


def best_simultaneous(d: SpectralDecomposition, start: int, targets: Sequence[int], T: float,
                      cfg: SweepConfig | None = None) -> MixtureEstimate:
    """Time in ``[0, T]`` maximizing ``min_v |phi_t(v)|^2`` over ``targets``
    (the earliest one when several tie)."""
    cfg = cfg or SweepConfig()
    if not T > 0:
        raise ValueError("window T must be positive")
    targets = list(targets)
    coeffs = d.vectors[start, :]
    rows = d.vectors[targets, :] * coeffs
    mass = np.abs(rows).sum(axis=0)
    keep = np.flatnonzero(mass > cfg.amp_tol * mass.max())
    rel_all = d.values - d.values[0]
    spread = float(np.ptp(rel_all[keep])) if keep.size > 1 else 0.0

    def worst(t):
        ph = np.exp(1j * np.multiply.outer(np.atleast_1d(t), rel_all))
        return (np.abs(ph @ rows.T) ** 2).min(axis=1)

    h = T / max(cfg.coarse_steps, 1)
    if spread > 0:
        h = min(h, 0.1 * 2 * math.pi / spread)
    n_grid = int(math.ceil(T / h)) + 1
    if n_grid > cfg.max_grid:
        raise WindowError(f"window needs {n_grid} grid points (cap {cfg.max_grid})")
    grid = np.minimum(np.arange(n_grid) * h, T)
    vals = np.concatenate([worst(grid[s:s + 200_000]) for s in range(0, n_grid, 200_000)])
    cand = np.argsort(vals)[::-1][:64]
    lo = np.maximum(grid[cand] - h, 0.0)
    hi = np.minimum(grid[cand] + h, T)
    t_ref, v_ref = _golden_max(worst, lo, hi, cfg.refine_iters)
    v_grid = worst(grid[cand])
    better = v_grid > v_ref
    t_ref = np.where(better, grid[cand], t_ref)
    v_ref = np.where(better, v_grid, v_ref)
    ties = np.flatnonzero(v_ref >= v_ref.max() - cfg.tie_tol * 1e-3)
    t = float(t_ref[ties].min())
    ph = np.exp(1j * t * rel_all)
    probs = tuple(float(p) for p in np.abs(rows @ ph) ** 2)
    return MixtureEstimate(t, probs, T)


def _dominant_gap(d: SpectralDecomposition, weights: np.ndarray) -> float:
    """Eigenvalue gap between the two components carrying the most transfer weight."""
    if len(weights) < 2:
        return math.nan
    i, j = np.argsort(np.abs(weights))[::-1][:2]
    return float(abs(d.values[i] - d.values[j]))


@dataclass(frozen=True)
class TcCurve:
    estimates: tuple[TunnelingEstimate, ...]
    window_exp: float
    stabilized: bool
    tail: float
    notes: tuple[str, ...] = ()


def tc_curve(g: Graph, template: PotentialSpec, start: int, target: int,
             cfg: SweepConfig | None = None) -> TcCurve:
    """One windowed sup estimate per depth in the schedule."""
    cfg = cfg or SweepConfig()
    wells = template.wells
    if start not in wells or target not in wells:
        raise ValueError("start and target must be wells of the potential")
    exponent = cfg.window_exp
    if exponent is None:
        exponent = max(shortest_distance(g, start, target) - 1, 0)

    def one(q: float) -> TunnelingEstimate:
        dec = spectrum(g, template.with_depth(q))
        return sup_transfer(dec, start, target, cfg.window(q, exponent), cfg, Q=q)

    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            ests = tuple(pool.map(one, cfg.q_schedule))
    else:
        ests = tuple(one(q) for q in cfg.q_schedule)
    tail3 = [e.sup_prob for e in ests[-3:]]
    stable = len(tail3) == 3 and max(tail3) - min(tail3) <= 0.02
    notes = () if stable else ("tail not stabilized: last three estimates differ by more than 0.02",)
    return TcCurve(ests, float(exponent), stable, ests[-1].sup_prob, notes)


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope)


def time_exponent_fit(estimates: Sequence[TunnelingEstimate], floor: float = 0.5) -> float:
    """Least-squares slope of ``log argmax_t`` against ``log Q``."""
    use = [e for e in estimates if e.sup_prob >= floor and e.Q > 0 and e.argmax_t > 0]
    if len(use) < 3:
        raise InsufficientDataError(f"need 3 usable estimates above {floor}, got {len(use)}")
    return loglog_slope([e.Q for e in use], [e.argmax_t for e in use])


@dataclass(frozen=True)
class GapFit:
    slope: float
    schedule: tuple[float, ...]
    gaps: tuple[float, ...]
    argmax_over_pi_gap: tuple[float, ...] = ()


def well_gap(g: Graph, p: PotentialSpec) -> tuple[float, SpectralDecomposition]:
    dec = spectrum(g, p)
    pairs = well_eigenpairs(dec, p.wells)
    if len(pairs.indices) != 2:
        raise EigenpairIdentificationError(
            f"expected 2 well eigenpairs at Q={p.depth}, found {len(pairs.indices)}")
    i, j = pairs.indices
    return float(dec.values[j] - dec.values[i]), dec


def gap_scaling_fit(g: Graph, template: PotentialSpec, schedule: Sequence[float],
                    cfg: SweepConfig | None = None) -> GapFit:
    """Slope of ``log(lambda_2 - lambda_1)`` against ``log Q`` for a double well.

    With ``cfg`` given, each depth also runs ``sup_transfer`` between the two
    wells and records ``argmax_t * gap / pi``.
    """
    gaps = []
    checks = []
    for q in schedule:
        gap, dec = well_gap(g, template.with_depth(q))
        gaps.append(gap)
        if cfg is not None:
            x, y = template.wells
            e = cfg.window_exp
            if e is None:
                e = max(shortest_distance(g, x, y) - 1, 0)
            est = sup_transfer(dec, x, y, cfg.window(q, e), cfg, Q=q)
            checks.append(est.argmax_t * gap / math.pi)
    return GapFit(loglog_slope(schedule, gaps), tuple(schedule), tuple(gaps), tuple(checks))


# -- double-well classification ---------------------------------------------

PERFECT, PARTIAL, NONE = "Perfect", "Partial", "None"


@dataclass(frozen=True)
class DoubleWellReport:
    x: int
    y: int
    d: int
    co: Cospectrality
    regime: str
    tc_pred: Fraction | None = None
    ratio: RadicalScalar | None = None  # (P_xx(d) - P_yy(d)) / P_xy(d)
    a_sq: float | None = None
    b_sq: float | None = None
    gap_prediction: float | None = None
    exponent_fit: float | None = None
    expected_time_exponent: int | None = None
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        out = {
            "kind": "double-well",
            "wells": [self.x, self.y],
            "d": self.d,
            "co": self.co.to_json(),
            "regime": self.regime,
            "tc_pred": None if self.tc_pred is None else str(self.tc_pred),
            "tc_pred_float": None if self.tc_pred is None else float(self.tc_pred),
            "ratio": None if self.ratio is None else self.ratio.to_json(),
            "ratio_squared": None if self.ratio is None else str(self.ratio.square()),
            "a_sq": self.a_sq,
            "b_sq": self.b_sq,
            "prose_bound_a_sq": self.a_sq,
            "gap_prediction": self.gap_prediction,
            "gap_exponent_fit": self.exponent_fit,
            "expected_time_exponent": self.expected_time_exponent,
            "notes": list(self.notes),
        }
        return out


def partial_prediction(ratio_sq: Fraction) -> tuple[Fraction, float, float]:
    """Limit transfer ``4 a^2 b^2`` and the pair ``(a^2, b^2)``.

    The limiting well eigenvectors are ``(a, b)`` and ``(-b, a)`` with
    ``a/b - b/a = c``; then ``a^2 b^2 = 1/(4 + c^2)`` exactly.
    """
    c_abs = math.sqrt(ratio_sq)
    r = (c_abs + math.sqrt(ratio_sq + 4)) / 2
    a_sq = r * r / (1 + r * r)
    return Fraction(4) / (4 + ratio_sq), a_sq, 1 - a_sq


def classify_double_well(g: Graph, x: int, y: int, k_cut: int | None = None,
                         schedule: Sequence[float] | None = DEFAULT_SCHEDULE) -> DoubleWellReport:
    """Perfect / partial / no tunneling from distance and cospectrality.

    The simple potential on ``{x, y}`` is implied. With a ``schedule`` the
    report also carries ``pi / gap`` at the top depth and the fitted gap
    exponent.
    """
    g.check_vertex(x)
    g.check_vertex(y)
    if x == y:
        raise ValueError("the two wells must differ")
    dist = shortest_distance(g, x, y)
    k_cut = max(k_cut if k_cut is not None else default_k_cut(g), dist)
    co = cospectrality(g, x, y, k_cut)
    wells = (x, y)
    notes = []
    tc_pred = ratio = a_sq = b_sq = None
    if co.at_least(dist):
        regime = PERFECT
        tc_pred = Fraction(1)
    elif co.value == dist - 1:
        regime = PARTIAL
        diff = well_walk_sum(g, wells, x, x, dist) - well_walk_sum(g, wells, y, y, dist)
        ratio = diff / well_walk_sum(g, wells, x, y, dist)
        tc_pred, a_sq, b_sq = partial_prediction(ratio.square())
        notes.append(f"prose bound a^2 = {a_sq:.6f}; two-level maximum 4a^2b^2 = {float(tc_pred):.6f}")
    else:
        regime = NONE
        tc_pred = Fraction(0)
    gap_pred = fit = None
    if schedule:
        try:
            gf = gap_scaling_fit(g, PotentialSpec.simple(g.n, wells), schedule)
            gap_pred = math.pi / gf.gaps[-1]
            fit = -gf.slope
        except EigenpairIdentificationError as exc:
            notes.append(f"Q too small: {exc}")
    return DoubleWellReport(
        x, y, dist, co, regime, tc_pred, ratio, a_sq, b_sq, gap_pred, fit,
        dist - 1 if regime != NONE else None, tuple(notes),
    )
