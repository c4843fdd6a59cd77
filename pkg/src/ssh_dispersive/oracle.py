"""Brute-force evolution oracle on a truncated lattice.

e^{-iHt} psi is expanded in Chebyshev polynomials of the scaled Hamiltonian,
exact up to the series tolerance because ||H|| <= gamma_+ (band-edge bound).
All requested times share one pass of the recurrence.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.special import jv

from .errors import CausalityBudget, DomainError
from .model import HoppingParams, WaveFunction

_SERIES_TOL = 1e-15


def causal_cells(max_cell: int, max_time: float, p: HoppingParams,
                 margin: int = 16) -> int:
    """Truncation size covering the light cone of the requested window:
    max cell + v_max t plus a sub-ballistic spillover allowance."""
    vt = p.v_max * max_time
    return int(max_cell + math.ceil(vt) + margin + math.ceil(10.0 * vt ** (1.0 / 3.0)))


def truncated_hamiltonian(p: HoppingParams, n_cells: int,
                          two_sided: bool = False) -> csr_matrix:
    """Sparse matrix of the Hamiltonian on cells [0, n_cells) (index 2n + site)
    or on cells [-n_cells, n_cells] when two_sided."""
    offset = n_cells if two_sided else 0
    total = 2 * n_cells + 1 if two_sided else n_cells
    rows, cols, vals = [], [], []
    for n in range(total):
        a, b = 2 * n, 2 * n + 1
        rows += [a, b]
        cols += [b, a]
        vals += [p.gamma1, p.gamma1]
        if n >= 1:
            rows += [a, b - 2]
            cols += [b - 2, a]
            vals += [p.gamma2, np.conj(p.gamma2)]
    H = csr_matrix((vals, (rows, cols)), shape=(2 * total, 2 * total))
    return H


def _chebyshev_weights(times, scale: float):
    """Coefficient table c[j, m] = (2 - delta_{m0}) (-i)^m J_m(scale * t_j),
    truncated when every |J_m| falls below the series tolerance."""
    times = np.asarray(times, dtype=float)
    x = scale * times
    m_max = int(np.max(x) + 40.0 * (1.0 + np.max(x) ** (1.0 / 3.0))) + 20
    ms = np.arange(m_max + 1)
    table = jv(ms[None, :], x[:, None])           # (T, M)
    keep = np.max(np.abs(table), axis=0) >= _SERIES_TOL
    last = int(np.max(np.nonzero(keep)[0])) if keep.any() else 0
    ms = ms[:last + 1]
    table = table[:, :last + 1]
    pref = np.where(ms == 0, 1.0, 2.0) * (-1j) ** ms
    return table * pref[None, :]


def oracle_evolve(f: WaveFunction, times, p: HoppingParams, n_cells: int,
                  window=None, two_sided: bool = False):
    """Evolve f through every requested time on a truncated lattice of
    ``n_cells`` cells; returns one WaveFunction per time, restricted to
    ``window`` when given."""
    times = [float(t) for t in times]
    if any(t < 0 for t in times):
        raise DomainError("times must be nonnegative")
    lo, hi = f.support
    max_out = max(abs(window[0]), abs(window[1])) if window else 0
    needed = max(causal_cells(max(abs(lo), abs(hi)), max(times, default=0.0), p),
                 max_out + 1)
    if n_cells < needed:
        raise CausalityBudget(
            f"n_cells={n_cells} below the causal bound {needed}")
    if not two_sided and f.offset < 0:
        raise DomainError("half-line oracle needs support on n >= 0")

    H = truncated_hamiltonian(p, n_cells, two_sided)
    dim = H.shape[0]
    cell0 = n_cells if two_sided else 0
    v = np.zeros(dim, dtype=complex)
    for i, n in enumerate(range(f.offset, f.offset + len(f))):
        v[2 * (n + cell0)] = f.cells[i, 0]
        v[2 * (n + cell0) + 1] = f.cells[i, 1]

    weights = _chebyshev_weights(times, p.gamma_plus)   # (T, M)
    n_terms = weights.shape[1]
    Hs = H / p.gamma_plus
    out = np.zeros((len(times), dim), dtype=complex)
    prev, cur = None, v
    for m in range(n_terms):
        out += np.multiply.outer(weights[:, m], cur)
        nxt = Hs @ cur if prev is None else 2.0 * (Hs @ cur) - prev
        prev, cur = cur, nxt

    results = []
    for j in range(len(times)):
        cells = np.stack([out[j, 0::2], out[j, 1::2]], axis=1)
        psi = WaveFunction(cells, offset=-cell0)
        if window is not None:
            psi = WaveFunction(psi.window(window[0], window[1]),
                               offset=window[0])
        results.append(psi)
    return results
