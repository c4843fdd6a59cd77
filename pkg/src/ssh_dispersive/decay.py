"""Decay traces, envelope fits, and parameter scans.

The dispersive estimates under test are one-sided: observed norms must lie
below constant times an envelope shape. Constants asserted as envelopes are
therefore fitted by the maximum (log-)ratio, not least squares.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientData
from .model import HoppingParams, WaveFunction
from .oracle import causal_cells, oracle_evolve
from .propagator import EvolutionRequest, evolve_ac
from .quadrature import DEFAULT_SPEC


@dataclass(frozen=True)
class DecayTrace:
    times: np.ndarray
    sup_norm: np.ndarray        # sup_n |psi_n(t)|   (per-cell Euclidean pair norm)
    weighted_norm: np.ndarray   # sup_n |psi_n(t)| / (1 + n)
    per_cell: np.ndarray        # (T, N) magnitudes over `cells`
    cells: np.ndarray
    params: HoppingParams
    data_norms: dict            # l1, l1_1, l1_2 norms of the initial state


@dataclass(frozen=True)
class FitResult:
    exponent: float
    constant: float
    residual: float             # max relative deviation from constant * shape
    window: tuple


def trace_decay(req: EvolutionRequest, margin: int = 16) -> DecayTrace:
    """Evolve over the request's time grid and reduce to decay norms.

    The cell range is widened to the causal window of the largest time so the
    sup over n is effectively a sup over the whole half-line.
    """
    times = np.asarray([float(t) for t in req.times], dtype=float)
    if np.any(np.diff(times) <= 0):
        raise DomainError("times must be strictly increasing")
    f = req.initial
    n_top = causal_cells(max(abs(s) for s in f.support), float(times[-1]),
                         req.params, margin)
    cells = np.arange(0, n_top + 1)

    if req.method == "oracle":
        states = oracle_evolve(f, times, req.params, n_top + 1,
                               window=(0, n_top))
    else:
        states = evolve_ac(EvolutionRequest(req.params, f, tuple(times),
                                            (0, n_top), "analytic", req.spec))
    per_cell = np.stack([np.linalg.norm(s.window(0, n_top), axis=1)
                         for s in states])
    return DecayTrace(
        times=times,
        sup_norm=per_cell.max(axis=1),
        weighted_norm=(per_cell / (1.0 + cells)[None, :]).max(axis=1),
        per_cell=per_cell,
        cells=cells,
        params=req.params,
        data_norms={"l1": f.weighted_l1_norm(0),
                    "l1_1": f.weighted_l1_norm(1),
                    "l1_2": f.weighted_l1_norm(2)},
    )


def log_envelope(t):
    """log sqrt(2 + t^2) * t^{-1/2}."""
    t = np.asarray(t, dtype=float)
    return np.log(np.sqrt(2.0 + t * t)) / np.sqrt(t)


_SHAPES = {
    "t^-1/3": (lambda t: np.asarray(t, float) ** (-1.0 / 3.0), -1.0 / 3.0),
    "t^-1/2": (lambda t: np.asarray(t, float) ** (-0.5), -0.5),
    "t^-1/2 log": (log_envelope, -0.5),
}


def fit_power_law(times, values, model: str = "power") -> FitResult:
    """Fit values against a decay model on a time grid.

    ``model`` is "power" (free exponent, log-log least squares) or one of the
    fixed shapes "t^-1/3", "t^-1/2", "t^-1/2 log" (constant fitted as the
    midpoint of the log-ratio range). The residual is the maximum relative
    deviation of observed / (constant * shape) from 1.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    mask = values > 0
    if mask.sum() < 8:
        raise InsufficientData("need at least 8 positive samples")
    t, v = times[mask], values[mask]
    if model == "power":
        slope, intercept = np.polyfit(np.log(t), np.log(v), 1)
        shape = t ** slope
        exponent = float(slope)
        log_ratio = np.log(v / shape)
        constant = float(np.exp(intercept))
    elif model in _SHAPES:
        fn, exponent = _SHAPES[model]
        log_ratio = np.log(v / fn(t))
        constant = float(np.exp(0.5 * (log_ratio.max() + log_ratio.min())))
    else:
        raise DomainError(f"unknown model {model!r}")
    residual = float(np.max(np.abs(v / (constant *
                                        (t ** exponent if model == "power"
                                         else _SHAPES[model][0](t))) - 1.0)))
    return FitResult(exponent=exponent, constant=constant, residual=residual,
                     window=(float(t[0]), float(t[-1])))


def envelope_constant(times, values, shape) -> float:
    """Smallest C with values <= C * shape(times) everywhere (one-sided)."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    sh = np.asarray(shape(times) if callable(shape) else shape, dtype=float)
    if np.any(sh <= 0):
        raise DomainError("envelope shape must be positive")
    return float(np.max(values / sh))


def mixed_envelope_constant(trace: DecayTrace, with_log: bool = True,
                            sigma: int = 1) -> float:
    """Single C with |psi_n(t)| <= C (E(t) + n/t) ||f||_{l1_sigma} over the
    whole (n, t) grid, where E is the half-power envelope with or without
    its logarithmic factor."""
    t = trace.times[:, None]
    n = trace.cells[None, :]
    e = log_envelope(t) if with_log else t ** (-0.5)
    shape = (e + n / t) * trace.data_norms[f"l1_{sigma}"]
    return float(np.max(trace.per_cell / shape))


def theoretical_prefactor_airy(p: HoppingParams) -> float:
    """1 + v_max^{-2/3} + gamma_-^{-1/3} (sup-norm envelope prefactor)."""
    return 1.0 + p.v_max ** (-2.0 / 3.0) + p.gamma_minus ** (-1.0 / 3.0)


def theoretical_prefactor_edge(p: HoppingParams) -> float:
    """1 + v_max^{-1} + gamma_-^{-1/2} (weighted envelope prefactor)."""
    return 1.0 + p.v_max ** (-1.0) + p.gamma_minus ** (-0.5)


def constant_dependence_scan(param_grid, f: WaveFunction, times,
                             method: str = "oracle",
                             spec=DEFAULT_SPEC):
    """Fitted sup-norm envelope constant per parameter set, with its ratio to
    the theoretical prefactor; the estimates hold iff the ratio stays bounded
    uniformly over the grid."""
    rows = []
    for p in param_grid:
        req = EvolutionRequest(p, f, tuple(times), (0, 0), method, spec)
        trace = trace_decay(req)
        c = envelope_constant(trace.times, trace.sup_norm, _SHAPES["t^-1/3"][0])
        rows.append({
            "params": p,
            "constant": c,
            "prefactor": theoretical_prefactor_airy(p),
            "ratio": c / theoretical_prefactor_airy(p),
        })
    return rows
