"""Built-in verification suites.

Every suite builds its graphs programmatically and returns a list of
``Check`` records (expected, observed, tolerance, verdict). Nothing here
reads files or the network.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import networkx as nx
import numpy as np

from . import instances as inst
from .exact import RadicalScalar, is_perfect_square
from .graph import Graph, from_edges, load_graph
from .io import sweep_csv
from .spectral import (PotentialSpec, basis_state, eigendecompose, evolve, first_order_error,
                       hamiltonian, off_level_mass, spectrum, well_eigenpairs)
from .triple import (EQUILATERAL_IRRATIONAL, EQUILATERAL_RATIONAL_SLOW, MIXED_FROM_APEX,
                     NEAREST_PAIR_ONLY, APEX_BLOCKED, APEX_PERFECT, characteristic_polynomial,
                     classify_triple_well, depressed_discriminant, m_from_couplings,
                     odd_over_even, radical_is_rational)
from .tunneling import (NONE, PARTIAL, PERFECT, SweepConfig, best_simultaneous, classify_double_well,
                        gap_scaling_fit, sup_transfer, tc_curve, time_exponent_fit)
from .walks import transition_powers, well_walk_sum
from .wellseries import ztilde_eigen_target, ztilde_truncated


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    expected: str
    observed: str
    tolerance: str
    passed: bool

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"[{flag}] {self.suite}/{self.name}: observed {self.observed}; "
                f"expected {self.expected} (tol {self.tolerance})")

    def to_json(self) -> dict:
        return {"suite": self.suite, "name": self.name, "expected": self.expected,
                "observed": self.observed, "tolerance": self.tolerance, "passed": self.passed}


def _num(x: float) -> str:
    return f"{x:.6g}"


# -- walks ---------------------------------------------------------------------------

def enumerate_walks(g: Graph, K: int, avoid: Iterable[int] = ()) -> list[list[list[Fraction]]]:
    """Brute force: ``table[k][v][w]`` as the sum over every explicit walk of
    the product of ``1/d`` over all vertices but the last; walk interiors
    avoid ``avoid``."""
    avoid = frozenset(avoid)
    n = g.n
    table = [[[Fraction(0)] * n for _ in range(n)] for _ in range(K + 1)]
    for v in range(n):
        table[0][v][v] = Fraction(1)
        stack = [(v, 0, 1)]  # (current vertex, length, product of degrees so far)
        while stack:
            u, k, den = stack.pop()
            if k == K or (k > 0 and u in avoid):
                continue
            den2 = den * g.degree[u]
            for w in g.neighbors[u]:
                table[k + 1][v][w] += Fraction(1, den2)
                stack.append((w, k + 1, den2))
    return table


def walk_family(count: int = 60) -> list[Graph]:
    """Deterministic family of connected graphs with 2..6 vertices from the graph atlas."""
    out = []
    for G in nx.graph_atlas_g()[2:]:
        if G.number_of_nodes() >= 2 and G.number_of_edges() and nx.is_connected(G):
            out.append(from_edges(G.number_of_nodes(), sorted(G.edges())))
    step = max(1, len(out) // count)
    return out[::step][:count]


def suite_walks(K: int = 6, count: int = 60) -> list[Check]:
    family = walk_family(count)
    bad_free = bad_avoid = bad_sum = 0
    for g in family:
        wells = (0, g.n - 1)
        free = transition_powers(g, K)
        brute = enumerate_walks(g, K)
        rest = transition_powers(g, K, wells)
        brute_rest = enumerate_walks(g, K, wells)
        for k in range(K + 1):
            for v in range(g.n):
                for w in range(g.n):
                    bad_free += free.entry(k, v, w) != brute[k][v][w]
                    bad_avoid += rest.entry(k, v, w) != brute_rest[k][v][w]
        for k in range(1, K + 1):
            for v in wells:
                for w in wells:
                    got = well_walk_sum(g, wells, v, w, k, rest)
                    want = RadicalScalar(brute_rest[k][v][w] / g.degree[w], g.degree[v] * g.degree[w])
                    bad_sum += got != want
    return [
        Check("walks", "family-size", ">= 50 graphs", str(len(family)), "exact", len(family) >= 50),
        Check("walks", "transition-powers", "0 mismatches", str(bad_free), "exact", bad_free == 0),
        Check("walks", "avoiding-powers", "0 mismatches", str(bad_avoid), "exact", bad_avoid == 0),
        Check("walks", "well-walk-sum", "0 mismatches", str(bad_sum), "exact", bad_sum == 0),
    ]


# -- double wells -----------------------------------------------------------------------

def _curve(i: inst.Instance, window_exp: float | None = None):
    g = i.graph()
    cfg = SweepConfig(q_schedule=i.schedule, window_exp=i.window_exp if window_exp is None else window_exp)
    return g, tc_curve(g, PotentialSpec.simple(g.n, i.wells), i.start, i.target, cfg)


def suite_doublewell() -> list[Check]:
    i = inst.DOUBLE_PERFECT
    g, curve = _curve(i)
    top = curve.estimates[-1]
    slope_t = time_exponent_fit(curve.estimates)
    gap = gap_scaling_fit(g, PotentialSpec.simple(g.n, i.wells), i.schedule)
    product = top.argmax_t * gap.gaps[-1] / math.pi
    rep = classify_double_well(g, i.start, i.target, schedule=None)
    return [
        Check("doublewell", "P3-regime", PERFECT, rep.regime, "exact", rep.regime == PERFECT),
        Check("doublewell", "P3-sup-at-top-Q", ">= 0.99", _num(top.sup_prob), "0.99", top.sup_prob >= 0.99),
        Check("doublewell", "P3-argmax-slope", "1.0", _num(slope_t), "0.1", abs(slope_t - 1.0) <= 0.1),
        Check("doublewell", "P3-gap-slope", "-1.0", _num(gap.slope), "0.05", abs(gap.slope + 1.0) <= 0.05),
        Check("doublewell", "P3-argmax-times-gap-over-pi", "1.0", _num(product), "0.05",
              abs(product - 1.0) <= 0.05),
    ]


def suite_trichotomy() -> list[Check]:
    out = []
    for i, regime in zip(inst.TRICHOTOMY, (PERFECT, PARTIAL, NONE)):
        g, curve = _curve(i)
        rep = classify_double_well(g, i.start, i.target, schedule=None)
        top = curve.estimates[-1].sup_prob
        out.append(Check("trichotomy", f"{i.name}-regime", regime, rep.regime, "exact", rep.regime == regime))
        if regime == PERFECT:
            out.append(Check("trichotomy", f"{i.name}-sup", ">= 0.95", _num(top), "0.95", top >= 0.95))
        elif regime == PARTIAL:
            pred = float(rep.tc_pred)
            out.append(Check("trichotomy", f"{i.name}-sup", f"{rep.tc_pred} = {_num(pred)}", _num(top),
                             "0.05", abs(top - pred) <= 0.05))
        else:
            out.append(Check("trichotomy", f"{i.name}-sup", "<= 0.05", _num(top), "0.05", top <= 0.05))
    return out


# -- triple wells ------------------------------------------------------------------------

def suite_instability() -> list[Check]:
    _, c333 = _curve(inst.Y333)
    _, c233 = _curve(inst.Y233)
    v333 = c333.estimates[-1].sup_prob
    v233 = c233.estimates[-1].sup_prob
    return [
        Check("instability", "Y333-sup", "4/9 = 0.444444", _num(v333), "0.02", abs(v333 - 4 / 9) <= 0.02),
        Check("instability", "Y233-sup", ">= 0.90", _num(v233), "0.90", v233 >= 0.90),
        Check("instability", "contrast", ">= 0.4", _num(v233 - v333), "0.4", v233 - v333 >= 0.4),
    ]


def _tag_check(name: str, g: Graph, i: inst.Instance, want: str) -> Check:
    r = classify_triple_well(g, i.wells, i.start, i.target)
    return Check("triple", name, want, r.tag, "exact", r.tag == want)


def suite_triple() -> list[Check]:
    out = []
    # classification, from exact couplings only
    from .graph import path_graph, y_graph
    g = path_graph(6)
    r = classify_triple_well(g, (0, 1, 5), 0, 1)
    out.append(Check("triple", "path-nearest-pair", NEAREST_PAIR_ONLY, r.tag, "exact", r.tag == NEAREST_PAIR_ONLY))
    g, h = y_graph((3, 3, 3))
    r = classify_triple_well(g, h, h[1], h[2])
    tc = r.tc_table[h[1], h[2]]
    out.append(Check("triple", "Y333-tag", EQUILATERAL_RATIONAL_SLOW, r.tag, "exact",
                     r.tag == EQUILATERAL_RATIONAL_SLOW))
    out.append(Check("triple", "Y333-tc", "4/9", _num(tc), "1e-12", abs(tc - 4 / 9) <= 1e-12))
    g, h = y_graph((2, 3, 3))
    r = classify_triple_well(g, h, h[1], h[2])
    out.append(Check("triple", "Y233-perfect", "True", str(r.perfect), "exact", r.perfect is True))
    for name, i, want in (("C8-apex-tag", inst.MIXED_APEX, MIXED_FROM_APEX),
                          ("C8-far-tag", inst.APEX_EQUAL, APEX_PERFECT),
                          ("C8+pendant-far-tag", inst.APEX_UNEQUAL, APEX_BLOCKED)):
        out.append(_tag_check(name, i.graph(), i, want))

    # criterion: mixed state from the apex
    i = inst.MIXED_APEX
    g = i.graph()
    q = i.schedule[-1]
    d = spectrum(g, PotentialSpec.simple(g.n, i.wells, q))
    others = [w for w in i.wells if w != i.start]
    mix = best_simultaneous(d, i.start, others, 32 * q ** i.window_exp)
    ok = all(0.45 <= p <= 0.55 for p in mix.probs)
    out.append(Check("triple", "apex-mixture", "both in [0.45, 0.55]",
                     ", ".join(_num(p) for p in mix.probs) + f" at t={_num(mix.t)}", "0.05", ok))

    # criterion: apex-mediated transfer
    _, ceq = _curve(inst.APEX_EQUAL)
    _, cne = _curve(inst.APEX_UNEQUAL)
    veq, vne = ceq.estimates[-1].sup_prob, cne.estimates[-1].sup_prob
    out.append(Check("triple", "apex-equal-sup", ">= 0.95", _num(veq), "0.95", veq >= 0.95))
    out.append(Check("triple", "apex-unequal-gap-from-1", ">= 0.1", _num(1 - vne), "0.1", 1 - vne >= 0.1))
    return out


# -- spectral asymptotics ------------------------------------------------------------------

def suite_spectral() -> list[Check]:
    g = inst.three_level_graph()
    w = inst.THREE_LEVEL_WEIGHTS
    errs, masses = {}, {}
    for q in (1e3, 1e4):
        d = spectrum(g, PotentialSpec(w, q))
        errs[q] = first_order_error(d, w, q)
        masses[q] = off_level_mass(d, w)
    ratio = errs[1e4] / errs[1e3]
    n_top = sum(1 for x in w if x == 1.0)
    shrink = float(np.min(masses[1e3][:n_top] / masses[1e4][:n_top]))
    return [
        Check("spectral", "first-order-error-ratio", "<= 0.2", _num(ratio), "0.2", ratio <= 0.2),
        Check("spectral", "well-off-level-mass-shrink", ">= 5 per decade", _num(shrink), "5", shrink >= 5),
    ]


def suite_ztilde(q: float = 1e3) -> list[Check]:
    out = []
    for i in inst.TRICHOTOMY:
        g = i.graph()
        d = spectrum(g, PotentialSpec.simple(g.n, i.wells, q))
        pairs = well_eigenpairs(d, i.wells)
        worst_excess = -math.inf
        worst_resid = worst_tail = 0.0
        for k in pairs.indices:
            lam = float(d.values[k])
            psi = d.vectors[list(i.wells), k]
            z = ztilde_truncated(g, i.wells, lam)
            resid = float(np.linalg.norm(z.matrix @ psi - ztilde_eigen_target(lam, q) * psi))
            bound = z.tail_norm * float(np.linalg.norm(psi)) + 1e-8
            worst_excess = max(worst_excess, resid - bound)
            worst_resid, worst_tail = max(worst_resid, resid), max(worst_tail, bound - 1e-8)
        out.append(Check("ztilde", f"{i.name}-fixed-point", "residual <= tail + 1e-8",
                         f"{len(pairs.indices)} pairs, residual {worst_resid:.3e}, tail {worst_tail:.3e}",
                         "tail bound", len(pairs.indices) == len(i.wells) and worst_excess <= 0))
    return out


# -- exact diagnostics ----------------------------------------------------------------------

def generated_triples(count: int = 20, seed: int = 7) -> list[tuple[RadicalScalar, RadicalScalar, RadicalScalar]]:
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        if k % 5 == 0:
            c = RadicalScalar(Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 9))), int(rng.integers(1, 7)))
            out.append((c, c, c))
            continue
        trip = tuple(RadicalScalar(Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 9))),
                                   int(rng.integers(1, 7))) for _ in range(3))
        out.append(trip)
    return out


def suite_exact() -> list[Check]:
    out = []
    cases = [
        ("sqrt9-rational", radical_is_rational(1, 1).rational, True),
        ("sqrt33-irrational", radical_is_rational(1, 2).rational, False),
        ("Y-couplings-rational", radical_is_rational(Fraction(1, 6), Fraction(1, 6)).rational, True),
        ("1/2-odd-over-even", odd_over_even(Fraction(1, 2)), True),
        ("1-not-odd-over-even", odd_over_even(Fraction(1)), False),
        ("3/4-odd-over-even", odd_over_even(Fraction(3, 4)), True),
        ("2/3-not-odd-over-even", odd_over_even(Fraction(2, 3)), False),
    ]
    for name, got, want in cases:
        out.append(Check("exact", name, str(want), str(got), "exact", got == want))
    bad_poly = bad_disc = 0
    for cxy, cxz, cyz in generated_triples():
        rep = m_from_couplings(cxy, cxz, cyz)
        coeffs = characteristic_polynomial(rep)
        want = (Fraction(1), Fraction(0), -(cxy.square() + cxz.square() + cyz.square()),
                -2 * (cxy * cxz * cyz))
        bad_poly += coeffs != want
        # the coefficients must also reproduce the float eigenvalues
        roots = np.sort(np.roots([float(c) for c in coeffs]).real)
        bad_poly += not np.allclose(roots, np.sort(np.linalg.eigvalsh(rep.M)), atol=1e-12)
        multiple = depressed_discriminant(rep) == 0
        bad_disc += multiple != (cxy == cxz == cyz)
    out.append(Check("exact", "char-poly-20-triples", "0 mismatches", str(bad_poly), "exact", bad_poly == 0))
    out.append(Check("exact", "multiple-roots-iff-equal", "0 mismatches", str(bad_disc), "exact", bad_disc == 0))
    out.append(Check("exact", "big-integer-square", "True",
                     str(is_perfect_square((10 ** 40 + 7) ** 2)), "exact", is_perfect_square((10 ** 40 + 7) ** 2)))
    return out


# -- randomized invariants --------------------------------------------------------------------

def random_connected_graph(rng: np.random.Generator, n: int) -> Graph:
    edges = {(int(rng.integers(0, v)), v) for v in range(1, n)}
    for _ in range(int(rng.integers(0, n + 1))):
        u, v = sorted(int(x) for x in rng.choice(n, 2, replace=False))
        edges.add((u, v))
    return from_edges(n, sorted(edges))


def random_potential(rng: np.random.Generator, n: int) -> PotentialSpec:
    w = rng.uniform(0, 1, n) * (rng.uniform(size=n) < 0.6)
    w[int(rng.integers(0, n))] = 1.0
    return PotentialSpec(tuple(float(x) for x in w), float(rng.uniform(0, 1e3)))


def suite_invariants(samples: int = 120, seed: int = 2024) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst = {"unitarity": 0.0, "group-law": 0.0, "residual": 0.0, "orthonormality": 0.0}
    nondet = 0
    for s in range(samples):
        n = int(rng.integers(2, 9))
        g = random_connected_graph(rng, n)
        p = random_potential(rng, n)
        h = hamiltonian(g, p)
        d = eigendecompose(h)
        t1, t2 = rng.uniform(0, 50, 2)
        phi0 = basis_state(n, int(rng.integers(0, n)))
        a = evolve(d, phi0, t1)
        worst["unitarity"] = max(worst["unitarity"], abs(float(np.linalg.norm(a)) - 1.0))
        ab = evolve(d, a / np.linalg.norm(a), t2) * np.linalg.norm(a)
        worst["group-law"] = max(worst["group-law"], float(np.linalg.norm(ab - evolve(d, phi0, t1 + t2))))
        scale = 1.0 + float(np.linalg.norm(h, 2))
        worst["residual"] = max(worst["residual"],
                                float(np.abs(h @ d.vectors - d.vectors * d.values).max()) / scale)
        worst["orthonormality"] = max(worst["orthonormality"],
                                      float(np.abs(d.vectors.T @ d.vectors - np.eye(n)).max()))
        if s % 10 == 0 and n >= 2:
            cfg = SweepConfig(q_schedule=(p.depth,), coarse_steps=500)
            first = sweep_csv([sup_transfer(d, 0, n - 1, 20.0, cfg, Q=p.depth)])
            again = sweep_csv([sup_transfer(eigendecompose(hamiltonian(g, p)), 0, n - 1, 20.0, cfg, Q=p.depth)])
            nondet += first != again
    tols = {"unitarity": 1e-10, "group-law": 1e-9, "residual": 1e-10, "orthonormality": 1e-10}
    out = [Check("invariants", "samples", f">= 100", str(samples), "exact", samples >= 100)]
    for k, v in worst.items():
        out.append(Check("invariants", k, f"<= {tols[k]:g}", f"{v:.3e}", f"{tols[k]:g}", v <= tols[k]))
    out.append(Check("invariants", "determinism", "identical CSV bytes", f"{nondet} differences", "exact",
                     nondet == 0))
    return out


SUITES: dict[str, Callable[[], list[Check]]] = {
    "walks": suite_walks,
    "doublewell": suite_doublewell,
    "trichotomy": suite_trichotomy,
    "instability": suite_instability,
    "triple": suite_triple,
    "spectral": suite_spectral,
    "ztilde": suite_ztilde,
    "exact": suite_exact,
    "invariants": suite_invariants,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [c for key in SUITES for c in SUITES[key]()]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    return SUITES[name]()
