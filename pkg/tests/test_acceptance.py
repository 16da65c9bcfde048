"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL] criterion N`` line, which the
terminal summary repeats at the end of the run. Thresholds and runtime limits
are the fixed acceptance tolerances; the detailed per-check lines come from
the built-in verification suites.
"""

from __future__ import annotations

import time

import pytest

from qtunnel import instances as inst
from qtunnel.triple import triple_geometry
from qtunnel.verify import (suite_doublewell, suite_exact, suite_instability, suite_invariants, suite_spectral,
                            suite_trichotomy, suite_triple, suite_walks, suite_ztilde)

LINES: list[str] = []


def _report(number: int, title: str, checks, elapsed: float, limit: float | None, extra_ok: bool = True):
    failed = [c for c in checks if not c.passed]
    slow = limit is not None and elapsed >= limit
    ok = checks and not failed and not slow and extra_ok
    parts = [f"{c.name}={c.observed}" for c in checks]
    budget = f"{elapsed:.2f}s" + (f" (limit {limit:.0f}s)" if limit is not None else "")
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number} {title}: {'; '.join(parts)}; runtime {budget}"
    print(line)
    LINES.append(line)
    for c in checks:
        print("    " + c.line())
    assert not failed, "; ".join(c.line() for c in failed)
    assert not slow, f"runtime {elapsed:.1f}s exceeds {limit}s"
    assert extra_ok


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def _pick(checks, *names):
    chosen = [c for c in checks if c.name in names]
    assert len(chosen) == len(names), f"missing checks: {set(names) - {c.name for c in chosen}}"
    return chosen


def test_criterion_1_walk_oracle():
    checks, dt = _timed(suite_walks)
    _report(1, "walk algebra equals brute-force enumeration", checks, dt, 30)


def test_criterion_2_symmetric_double_well():
    checks, dt = _timed(suite_doublewell)
    _report(2, "symmetric double well", checks, dt, 60)


def test_criterion_3_trichotomy():
    checks, dt = _timed(suite_trichotomy)
    _report(3, "trichotomy", checks, dt, 180)


def test_criterion_4_instability():
    checks, dt = _timed(suite_instability)
    _report(4, "Y(3,3,3) vs Y(2,3,3)", checks, dt, 300)


def test_criterion_5_mixed_state_from_apex():
    checks, dt = _timed(suite_triple)
    _report(5, "mixed state from the apex", _pick(checks, "C8-apex-tag", "apex-mixture"), dt, None)


def test_criterion_6_apex_mediated():
    # the instances are chosen from exact couplings, before any simulation
    eq = triple_geometry(inst.APEX_EQUAL.graph(), *inst.APEX_EQUAL.wells)
    neq = triple_geometry(inst.APEX_UNEQUAL.graph(), *inst.APEX_UNEQUAL.wells)
    exact_ok = eq.coupling(0, 1) == eq.coupling(0, 2) and neq.coupling(0, 1) != neq.coupling(0, 2)
    checks, dt = _timed(suite_triple)
    chosen = _pick(checks, "C8-far-tag", "C8+pendant-far-tag", "apex-equal-sup", "apex-unequal-gap-from-1")
    _report(6, "apex-mediated transfer", chosen, dt, None, exact_ok)


def test_criterion_7_spectral_asymptotics():
    checks, dt = _timed(suite_spectral)
    _report(7, "first-order spectral asymptotics", checks, dt, None)


def test_criterion_8_ztilde_fixed_point():
    checks, dt = _timed(suite_ztilde)
    _report(8, "Z-tilde fixed point", checks, dt, None)


def test_criterion_9_exact_diagnostics():
    checks, dt = _timed(suite_exact)
    _report(9, "exact rationality and characteristic polynomial", checks, dt, 10)


def test_criterion_10_invariants():
    checks, dt = _timed(suite_invariants, samples=120, seed=2024)
    _report(10, "randomized invariants", checks, dt, 60)


@pytest.fixture(scope="module", autouse=True)
def _summary_header():
    LINES.clear()
    yield
