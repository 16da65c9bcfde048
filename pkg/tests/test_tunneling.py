from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtunnel.graph import cycle_graph, path_graph, y_graph
from qtunnel.spectral import PotentialSpec, spectrum, transfer_probability
from qtunnel.tunneling import (NONE, PARTIAL, PERFECT, InsufficientDataError, SweepConfig, TunnelingEstimate,
                               WindowError, best_simultaneous, classify_double_well, gap_scaling_fit,
                               partial_prediction, sup_transfer, tc_curve, time_exponent_fit)

from conftest import connected_graphs


def test_sweep_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(q_schedule=())
    with pytest.raises(ValueError):
        SweepConfig(q_schedule=(10, 5))
    with pytest.raises(ValueError):
        SweepConfig(q_schedule=(-1, 5))
    assert SweepConfig().window(100, 2) == 32 * 100 ** 2


def test_two_level_sup():
    d = spectrum(path_graph(2), PotentialSpec((1.0, 1.0), 0))
    est = sup_transfer(d, 0, 1, math.pi)
    assert est.sup_prob == pytest.approx(1.0, abs=1e-12)
    assert est.argmax_t == pytest.approx(math.pi / 2, abs=1e-6)


def test_start_equals_target():
    d = spectrum(cycle_graph(5), PotentialSpec.simple(5, [0], 3.0))
    est = sup_transfer(d, 2, 2, 10.0)
    assert est.sup_prob == pytest.approx(1.0, abs=1e-12) and est.argmax_t == pytest.approx(0.0, abs=1e-9)


@given(connected_graphs(min_n=2, max_n=6), st.floats(0, 20), st.floats(1, 40))
def test_sup_is_lower_bound_and_close_to_dense_scan(g, q, T):
    d = spectrum(g, PotentialSpec.simple(g.n, [0], q))
    cfg = SweepConfig(amp_tol=0.0)
    est = sup_transfer(d, 0, g.n - 1, T, cfg)
    ts = np.linspace(0, T, 200_001)
    dense = transfer_probability(d, 0, g.n - 1, ts).max()
    assert est.sup_prob >= dense - 1e-6
    # argmax_t is the earliest peak within tie_tol of the sup
    at = transfer_probability(d, 0, g.n - 1, [est.argmax_t])[0]
    assert est.sup_prob - cfg.tie_tol <= at <= est.sup_prob + 1e-9


def test_earliest_peak_is_reported():
    d = spectrum(path_graph(2), PotentialSpec((1.0, 1.0), 0))
    est = sup_transfer(d, 0, 1, 10 * math.pi)
    assert est.argmax_t == pytest.approx(math.pi / 2, abs=1e-6)


def test_window_cap():
    d = spectrum(path_graph(3), PotentialSpec.simple(3, [0, 2], 10.0))
    with pytest.raises(WindowError):
        sup_transfer(d, 0, 2, 1e9, SweepConfig(max_grid=1000))


def test_symmetric_double_well_sweep():
    g = path_graph(3)
    curve = tc_curve(g, PotentialSpec.simple(3, [0, 2]), 0, 2)
    assert curve.window_exp == 1
    assert all(e.sup_prob >= 0.99 for e in curve.estimates) and curve.stabilized
    assert time_exponent_fit(curve.estimates) == pytest.approx(1.0, abs=0.05)


def test_d3_time_and_gap_exponents():
    g = path_graph(4)
    tmpl = PotentialSpec.simple(4, [0, 3])
    curve = tc_curve(g, tmpl, 0, 3)
    assert curve.window_exp == 2
    assert time_exponent_fit(curve.estimates) == pytest.approx(2.0, abs=0.1)
    assert gap_scaling_fit(g, tmpl, (1e2, 10 ** 2.5, 1e3)).slope == pytest.approx(-2.0, abs=0.05)


def test_gap_fit_constant_gap():
    g = path_graph(2)
    fit = gap_scaling_fit(g, PotentialSpec((1.0, 1.0)), (1.0, 10.0, 100.0))
    assert fit.gaps == pytest.approx((2.0, 2.0, 2.0))
    assert fit.slope == pytest.approx(0.0, abs=1e-12)


def test_time_exponent_fit_edge_cases():
    flat = [TunnelingEstimate(q, 1.0, 5.0, 10.0) for q in (10.0, 100.0, 1000.0)]
    assert time_exponent_fit(flat) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(InsufficientDataError):
        time_exponent_fit(flat[:2])
    with pytest.raises(InsufficientDataError):
        time_exponent_fit([TunnelingEstimate(q, 0.1, 5.0, 10.0) for q in (10.0, 100.0, 1000.0)])


def test_workers_do_not_change_results():
    g, hubs = y_graph((3, 3, 3))
    tmpl = PotentialSpec.simple(g.n, hubs)
    serial = tc_curve(g, tmpl, hubs[1], hubs[2], SweepConfig(window_exp=2.0))
    pooled = tc_curve(g, tmpl, hubs[1], hubs[2], SweepConfig(window_exp=2.0, workers=3))
    assert serial == pooled


def test_partial_prediction_identity():
    tc, a2, b2 = partial_prediction(Fraction(1, 2))
    assert tc == Fraction(8, 9)
    assert 4 * a2 * b2 == pytest.approx(float(tc), abs=1e-15)
    assert a2 == pytest.approx(2 / 3) and a2 + b2 == pytest.approx(1.0)
    assert partial_prediction(Fraction(0))[0] == 1


def test_classify_double_well_examples():
    rep = classify_double_well(path_graph(3), 0, 2)
    assert (rep.regime, rep.d, rep.tc_pred) == (PERFECT, 2, 1)
    assert rep.exponent_fit == pytest.approx(1.0, abs=0.05)
    rep = classify_double_well(path_graph(4), 0, 2, schedule=None)
    assert rep.regime == PARTIAL and rep.tc_pred == Fraction(8, 9)
    assert rep.ratio.square() == Fraction(1, 2)
    rep = classify_double_well(path_graph(5), 0, 3, schedule=None)
    assert rep.regime == NONE and rep.tc_pred == 0
    # adjacent wells are always Perfect since co >= 1
    assert classify_double_well(path_graph(4), 0, 1, schedule=None).regime == PERFECT
    with pytest.raises(ValueError):
        classify_double_well(path_graph(3), 1, 1)


def test_partial_prediction_matches_simulation():
    g = path_graph(4)
    curve = tc_curve(g, PotentialSpec.simple(4, [0, 2]), 0, 2)
    assert curve.tail == pytest.approx(8 / 9, abs=0.01)


def test_best_simultaneous_two_level():
    d = spectrum(path_graph(2), PotentialSpec((1.0, 1.0), 0))
    mix = best_simultaneous(d, 0, [0, 1], math.pi)
    assert mix.probs == pytest.approx((0.5, 0.5), abs=1e-6)
    assert mix.t == pytest.approx(math.pi / 4, abs=1e-5)
