import numpy as np
import pytest

from ssh_dispersive import (EvolutionRequest, HoppingParams, InsufficientData,
                            WaveFunction, constant_dependence_scan,
                            envelope_constant, fit_power_law, log_envelope,
                            mixed_envelope_constant,
                            theoretical_prefactor_airy,
                            theoretical_prefactor_edge, trace_decay)


def test_fit_recovers_synthetic_power_law():
    t = np.geomspace(10, 1e4, 40)
    fit = fit_power_law(t, 3.7 * t ** (-0.5), "power")
    assert abs(fit.exponent + 0.5) < 1e-10
    assert abs(fit.constant - 3.7) < 1e-3
    assert fit.residual < 1e-10


def test_fit_fixed_shape_constant():
    t = np.geomspace(5, 1e3, 30)
    vals = 2.0 * log_envelope(t)
    fit = fit_power_law(t, vals, "t^-1/2 log")
    assert abs(fit.constant - 2.0) < 0.02
    # one-sided: the fitted envelope dominates the data
    assert np.all(vals <= fit.constant * log_envelope(t) * (1 + 1e-12))


def test_fit_requires_enough_points():
    t = np.geomspace(1, 10, 5)
    with pytest.raises(InsufficientData):
        fit_power_law(t, t ** -0.5, "power")


def test_envelope_constant_is_tight_upper_bound():
    t = np.geomspace(1, 100, 25)
    vals = 1.3 * t ** (-1 / 3)
    c = envelope_constant(t, vals, lambda s: np.asarray(s, float) ** (-1 / 3))
    assert abs(c - 1.3) < 1e-12


def test_trace_decay_oracle_small():
    p = HoppingParams(1.0, 0.5)
    req = EvolutionRequest(p, WaveFunction.delta(0, "A"),
                           tuple(np.geomspace(20, 200, 8)), (0, 0), "oracle")
    trace = trace_decay(req)
    assert trace.sup_norm.shape == (8,)
    assert np.all(np.diff(trace.sup_norm) < 0)
    # sup over cells bounds the tracked per-cell magnitudes
    assert np.all(trace.sup_norm >= trace.per_cell.max(axis=1) - 1e-15)


def test_trace_decay_analytic_matches_oracle():
    p = HoppingParams(1.0, 0.5)
    times = (30.0, 60.0)
    f = WaveFunction.delta(0, "A")
    a = trace_decay(EvolutionRequest(p, f, times, (0, 40), "oracle"))
    b = trace_decay(EvolutionRequest(p, f, times, (0, 40), "analytic"))
    n = min(a.per_cell.shape[1], b.per_cell.shape[1])
    assert np.max(np.abs(a.per_cell[:, :n] - b.per_cell[:, :n])) < 1e-5


def test_prefactor_shapes():
    p = HoppingParams(1.0, 0.5)
    assert theoretical_prefactor_airy(p) == pytest.approx(
        1 + p.v_max ** (-2 / 3) + p.gamma_minus ** (-1 / 3))
    assert theoretical_prefactor_edge(p) == pytest.approx(
        1 + 1 / p.v_max + p.gamma_minus ** (-0.5))


def test_constant_scan_rows():
    f = WaveFunction.delta(0, "A")
    times = np.geomspace(20, 120, 8)
    rows = constant_dependence_scan(
        [HoppingParams(1.0, 0.5), HoppingParams(1.0, 0.8)], f, times)
    assert len(rows) == 2
    for r in rows:
        assert r["ratio"] == pytest.approx(r["constant"] / r["prefactor"])
        assert 0 < r["ratio"] < 5


def test_mixed_envelope_is_one_sided():
    p = HoppingParams(1.0, 0.5)
    req = EvolutionRequest(p, WaveFunction.delta(0, "A"),
                           tuple(np.geomspace(20, 200, 10)), (0, 0), "oracle")
    trace = trace_decay(req)
    c = mixed_envelope_constant(trace, with_log=True, sigma=1)
    t = trace.times[None, :]
    n = np.asarray(trace.cells, float)[:, None]
    bound = c * trace.data_norms["l1_1"] * (log_envelope(t) + n / t)
    assert np.all(trace.per_cell.T <= bound * (1 + 1e-9))
