"""Verification battery: the twelve acceptance checks.

Each check returns a CheckResult; the battery is shared by the CLI ``verify``
command and the acceptance test suite. The ``quick`` tier shrinks grids to
keep the battery interactive; the ``full`` tier runs the sizes the criteria
are stated at.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import dispersion, resolvent
from .decay import (constant_dependence_scan, envelope_constant,
                    fit_power_law, mixed_envelope_constant, log_envelope,
                    trace_decay)
from .dispersion import (band_width_functions, k_derivatives, k_of,
                         q_star_complex, q_star_lambda)
from .errors import SSHDispersiveError
from .model import (HoppingParams, WaveFunction, apply_edge_hamiltonian,
                    chiral_conjugate, edge_state, project_ac)
from .oracle import causal_cells, oracle_evolve, truncated_hamiltonian
from .propagator import (EvolutionRequest, evolve_ac, type_I, type_II,
                         type_III)
from .quadrature import QuadratureSpec, pv_oscillatory_contour


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float
    skipped: bool = False

    def as_dict(self):
        return {"name": self.name, "passed": bool(self.passed),
                "skipped": bool(self.skipped), "detail": self.detail,
                "seconds": round(self.seconds, 3)}


def _result(name, passed, detail, t0):
    return CheckResult(name, bool(passed), detail, time.time() - t0)


# -- 1 ----------------------------------------------------------------------

def check_edge_state_kernel(tier="full") -> CheckResult:
    t0 = time.time()
    p = HoppingParams(1.0, 2.0)
    phi = edge_state(p, 200)
    ratio = apply_edge_hamiltonian(phi, p).norm() / phi.norm()
    return _result("edge_state_kernel", ratio < 1e-12,
                   f"|H phi*| / |phi*| = {ratio:.3e} (< 1e-12)", t0)


# -- 2 ----------------------------------------------------------------------

def check_symmetries(tier="full") -> CheckResult:
    t0 = time.time()
    rng = np.random.default_rng(42)
    worst_chiral = worst_herm = 0.0
    n_states = 50 if tier == "full" else 10
    for _ in range(n_states):
        p = HoppingParams(rng.uniform(0.3, 2.0),
                          rng.uniform(0.3, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi)))
        cells = rng.normal(size=(12, 2)) + 1j * rng.normal(size=(12, 2))
        psi = WaveFunction(cells)
        phi = WaveFunction(rng.normal(size=(12, 2)) + 1j * rng.normal(size=(12, 2)))
        lhs = chiral_conjugate(apply_edge_hamiltonian(chiral_conjugate(psi), p))
        rhs = apply_edge_hamiltonian(psi, p) * (-1.0)
        worst_chiral = max(worst_chiral, (lhs - rhs).norm())
        a = apply_edge_hamiltonian(psi, p).inner(phi)
        b = psi.inner(apply_edge_hamiltonian(phi, p))
        worst_herm = max(worst_herm, abs(a - b))
    ok = worst_chiral < 1e-12 and worst_herm < 1e-12
    return _result("symmetries", ok,
                   f"max |GHG+H|psi = {worst_chiral:.2e}, "
                   f"max Hermiticity defect = {worst_herm:.2e} (< 1e-12)", t0)


# -- 3 ----------------------------------------------------------------------

def check_dispersion_identities(tier="full") -> CheckResult:
    t0 = time.time()
    rng = np.random.default_rng(3)
    worst_shift = worst_eta = worst_fd = 0.0
    for _ in range(5):
        p = HoppingParams(rng.uniform(0.4, 2.0),
                          rng.uniform(0.4, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi)))
        q = np.linspace(-np.pi, np.pi, 1000)
        h = p.gamma1 + p.gamma2 * np.exp(-1j * q)
        hbar = p.gamma1 + np.conj(p.gamma2) * np.exp(1j * q)
        worst_shift = max(worst_shift, float(np.max(np.abs(
            k_of(q - p.phi, p) ** 2 - h * hbar))))
        lam = np.linspace(p.gamma_minus + 1e-12, p.gamma_plus - 1e-12, 1000)
        eta = dispersion.eta_of(lam, p)
        lhs = (2 * p.g) ** 2 * (1.0 - eta ** 2)
        rhs = (p.gamma_plus ** 2 - lam ** 2) * (lam ** 2 - p.gamma_minus ** 2)
        worst_eta = max(worst_eta, float(np.max(np.abs(lhs - rhs))))
        ys = rng.uniform(0.2, np.pi - 0.2, 12)
        h0 = 1e-5
        for order in (1, 2, 3, 4):
            lo = k_derivatives(ys - h0, order - 1, p) if order > 1 else k_of(ys - h0, p)
            hi = k_derivatives(ys + h0, order - 1, p) if order > 1 else k_of(ys + h0, p)
            fd = (hi - lo) / (2 * h0)
            worst_fd = max(worst_fd, float(np.max(np.abs(
                fd - k_derivatives(ys, order, p)))))
    ok = worst_shift < 1e-12 and worst_eta < 1e-12 and worst_fd < 1e-6
    return _result("dispersion_identities", ok,
                   f"symbol factorization {worst_shift:.2e}, eta identity "
                   f"{worst_eta:.2e} (< 1e-12), derivative FD {worst_fd:.2e} "
                   f"(< 1e-6)", t0)


# -- 4 ----------------------------------------------------------------------

def check_q_star(tier="full") -> CheckResult:
    t0 = time.time()
    rng = np.random.default_rng(4)
    n = 1000 if tier == "full" else 200
    worst = 0.0
    p = HoppingParams(1.0, 1.7 * np.exp(0.3j))
    for _ in range(n):
        om = complex(rng.uniform(-9, 9), rng.uniform(0.05, 4) * rng.choice([-1, 1]))
        q = q_star_complex(om, p)
        worst = max(worst, abs(dispersion.k2_complex(q, p) - om) / max(1.0, abs(om)))
    # boundary approach at a band edge: |q*(edge^2 + i eps)| ~ sqrt(eps)
    eps = np.geomspace(1e-8, 1e-2, 13)
    dist = np.array([abs(q_star_complex(p.gamma_plus ** 2 + 1j * e, p))
                     for e in eps])
    slope = np.polyfit(np.log(eps), np.log(dist), 1)[0]
    ok = worst < 1e-12 and abs(slope - 0.5) < 0.1
    return _result("q_star", ok,
                   f"roundtrip rel err {worst:.2e} (< 1e-12), band-edge "
                   f"eps-slope {slope:.3f} (0.5 +- 0.1)", t0)


# -- 5 ----------------------------------------------------------------------

def check_closed_forms(tier="full") -> CheckResult:
    t0 = time.time()
    rng = np.random.default_rng(5)
    spec = QuadratureSpec(rel_tol=1e-10, max_panels=30000)
    n_z = 20 if tier == "full" else 6
    worst = 0.0
    p = HoppingParams(1.0, 1.4 * np.exp(0.8j))
    for _ in range(n_z):
        z = complex(rng.uniform(-3, 3), rng.uniform(0.2, 2) * rng.choice([-1, 1]))
        for n in (0, 1):
            a = resolvent.J_closed(n, z, p)
            b = resolvent.J_quadrature(n, z, p, spec)
            worst = max(worst, abs(a - b) / abs(b))
        det_q = 1.0 - np.conj(p.gamma2) * (
            p.gamma1 * resolvent.J_quadrature(1, z, p, spec) +
            p.gamma2 * resolvent.J_quadrature(0, z, p, spec))
        det_c = resolvent.boundary_determinant(z, p)
        worst = max(worst, abs(det_c - det_q) / abs(det_q))
    return _result("closed_forms", worst < 1e-8,
                   f"max rel deviation closed form vs quadrature {worst:.2e} "
                   f"(< 1e-8) at {n_z} off-spectrum z", t0)


# -- 6 ----------------------------------------------------------------------

def check_resolvent_oracle(tier="full") -> CheckResult:
    t0 = time.time()
    rng = np.random.default_rng(6)
    n_cases = 5 if tier == "full" else 2
    n_lat = 400
    worst = 0.0
    for g2 in (0.5, 2.0):
        p = HoppingParams(1.0, g2)
        H = truncated_hamiltonian(p, n_lat).toarray()
        eye = np.eye(2 * n_lat)
        for _ in range(n_cases):
            while True:
                z = complex(rng.uniform(-4, 4), rng.uniform(-1.5, 1.5))
                bands_dist = abs(z.imag) if p.gamma_minus <= abs(z.real) <= p.gamma_plus \
                    else min(abs(z - s * e) for s in (1, -1)
                             for e in (p.gamma_minus, p.gamma_plus))
                if p.is_topological:
                    bands_dist = min(bands_dist, abs(z))
                if bands_dist >= 0.1:
                    break
            cells = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
            f = WaveFunction(cells)
            rhs = np.zeros(2 * n_lat, dtype=complex)
            rhs[0:8:2], rhs[1:8:2] = cells[:, 0], cells[:, 1]
            ref = np.linalg.solve(H - z * eye, rhs)
            mine = resolvent.resolvent_apply(f, z, p, (0, 20))
            refw = np.stack([ref[0:42:2], ref[1:42:2]], axis=1)
            worst = max(worst, float(np.max(np.abs(mine.cells - refw)) /
                                     np.max(np.abs(refw))))
    return _result("resolvent_oracle", worst < 1e-8,
                   f"max interior rel err vs N={n_lat} solve {worst:.2e} "
                   f"(< 1e-8), both phases", t0)


# -- 7 ----------------------------------------------------------------------

def check_propagator_oracle(tier="full", spec=None) -> CheckResult:
    t0 = time.time()
    times = (1.0, 5.0, 10.0) if tier == "full" else (1.0, 5.0)
    if spec is None:
        spec = QuadratureSpec(rel_tol=1e-8, max_panels=60000)
    if spec.rel_tol > 1e-6:
        return _result(
            "propagator_oracle", False,
            f"quadrature rel_tol {spec.rel_tol:.1e} cannot certify the 1e-5 "
            f"propagator-equivalence tolerance (need <= 1e-6)", t0)
    worst = 0.0
    for g2 in (0.5, 2.0):
        p = HoppingParams(1.0, g2)
        f = WaveFunction.delta(0, "A")
        fac = project_ac(f, p, 400).trimmed(1e-14)
        n_lat = causal_cells(fac.support[1], max(times), p)
        oracle = oracle_evolve(fac, times, p, n_lat, window=(0, 30))
        mine = evolve_ac(EvolutionRequest(p, f, times, (0, 30), "analytic", spec))
        for a, b in zip(mine, oracle):
            worst = max(worst, float(np.max(np.abs(a.cells - b.cells))))
    return _result("propagator_oracle", worst < 1e-5,
                   f"max l-inf deviation evolve_ac vs oracle {worst:.2e} "
                   f"(< 1e-5), cells 0..30, t in {times}, both phases", t0)


# -- 8 ----------------------------------------------------------------------

def _brute_type_I(n, t, p):
    def integrand(lam, part):
        eta = dispersion.eta_of(lam, p)
        y = math.acos(max(-1.0, min(1.0, eta)))
        amp = lam * math.cos(n * y) / (p.g * math.sqrt(max(1e-300, 1 - eta * eta)))
        ph = complex(math.cos(lam * t), -math.sin(lam * t))
        return (amp * ph).real if part == 0 else (amp * ph).imag

    re = quad(lambda x: integrand(x, 0), p.gamma_minus, p.gamma_plus,
              limit=3000, epsabs=1e-12, epsrel=1e-12)[0]
    im = quad(lambda x: integrand(x, 1), p.gamma_minus, p.gamma_plus,
              limit=3000, epsabs=1e-12, epsrel=1e-12)[0]
    return complex(re, im)


def _brute_type_II_t0(n, p):
    def outer(y):
        c = k_of(float(y), p)
        return math.cos(n * y) * math.log((p.gamma_plus + c) /
                                          (p.gamma_minus + c))
    return quad(outer, 0.0, math.pi, limit=500, epsabs=1e-11)[0]


def _brute_type_III(n, t, p):
    """Independent reference: the inner principal value has the closed form
    e^{-ict}[Ci(Bt)-Ci(At) - i(Si(Bt)+Si(At))] with A, B the distances from
    the pole to the band endpoints, leaving one 1-D quadrature in y with
    integrable log singularities at the endpoints."""
    from scipy.special import sici
    g1, g2 = p.gamma1, abs(p.gamma2)

    def outer(y, part):
        c = math.sqrt(g1 * g1 + g2 * g2 + 2 * p.g * math.cos(y))
        dist_lo = 4 * p.g * math.cos(y / 2) ** 2 / (c + p.gamma_minus)
        dist_hi = 4 * p.g * math.sin(y / 2) ** 2 / (p.gamma_plus + c)
        s_hi, c_hi = sici(dist_hi * t)
        s_lo, c_lo = sici(dist_lo * t)
        inner = complex(math.cos(c * t), -math.sin(c * t)) * \
            complex(c_hi - c_lo, -(s_hi + s_lo))
        v = math.cos(n * y) * inner
        return v.real if part == 0 else v.imag

    pts = sorted(list(np.geomspace(1e-9, 0.5, 15)) +
                 list(math.pi - np.geomspace(1e-9, 0.5, 15)))
    return complex(*(quad(lambda y: outer(y, part), 0.0, math.pi,
                          limit=3000, epsabs=1e-11, points=pts)[0]
                     for part in (0, 1)))


def check_type_terms(tier="full") -> CheckResult:
    t0 = time.time()
    spec = QuadratureSpec(rel_tol=1e-9, max_panels=60000)
    one = lambda y: np.ones_like(np.asarray(y, dtype=float))
    msgs, ok = [], True

    p = HoppingParams(1.0, 2.0)
    v = type_I(3, 20.0, one, p, spec).value
    b = _brute_type_I(3, 20.0, p)
    rel = abs(v - b) / abs(b)
    ok &= rel < 1e-7
    msgs.append(f"I rel {rel:.2e} (< 1e-7)")

    p = HoppingParams(1.0, 0.5)
    a2, b2 = type_II(2, 0.0, one, p, spec)
    bb = _brute_type_II_t0(2, p)
    rel = abs((a2.value + b2.value) - bb) / abs(bb)
    ok &= rel < 1e-6
    msgs.append(f"II rel {rel:.2e} (< 1e-6)")

    if tier == "full":
        a3, b3 = type_III(2, 5.0, one, p, spec)
        bb = _brute_type_III(2, 5.0, p)
        dev = abs((a3.value + b3.value) - bb)
        ok &= dev < 1e-5
        msgs.append(f"III abs {dev:.2e} (< 1e-5)")

    return _result("type_terms", ok, ", ".join(msgs), t0)


# -- 9 ----------------------------------------------------------------------

def check_decay_envelopes(tier="full") -> CheckResult:
    t0 = time.time()
    p = HoppingParams(1.0, 0.5)
    f = WaveFunction.delta(0, "A")
    if tier == "full":
        times = tuple(np.geomspace(1e2, 1e4, 25))
        spot_times = (100.0, 1000.0, 10000.0)
    else:
        times = tuple(np.geomspace(1e2, 1e3, 10))
        spot_times = (100.0,)
    trace = trace_decay(EvolutionRequest(p, f, times, (0, 0), "oracle"))
    fit = fit_power_law(trace.times, trace.sup_norm, "power")
    c1 = envelope_constant(trace.times, trace.sup_norm,
                           lambda t: np.asarray(t, float) ** (-1.0 / 3.0))
    c2 = mixed_envelope_constant(trace, with_log=True, sigma=1)
    c3 = mixed_envelope_constant(trace, with_log=False, sigma=2)
    slope_ok = fit.exponent <= -1.0 / 3.0 + 0.05

    spec = QuadratureSpec(rel_tol=1e-8, max_panels=120000)
    worst_spot = 0.0
    for ts in spot_times:
        idx = int(np.argmin(np.abs(trace.times - ts)))
        tv = float(trace.times[idx])
        top = causal_cells(0, tv, p)
        mine = evolve_ac(EvolutionRequest(p, f, (tv,), (0, top),
                                          "analytic", spec))[0]
        mag = np.linalg.norm(mine.window(0, top), axis=1)
        worst_spot = max(worst_spot, float(np.max(np.abs(
            mag - trace.per_cell[idx][: top + 1]))))
    spot_ok = worst_spot < 1e-5
    ok = slope_ok and spot_ok and np.isfinite(c1) and np.isfinite(c2) and \
        np.isfinite(c3)
    return _result(
        "decay_envelopes", ok,
        f"sup slope {fit.exponent:.3f} (<= -0.283), C1={c1:.3f}, "
        f"C2={c2:.3f} (log,l1_1), C3={c3:.3f} (no log,l1_2), analytic "
        f"spot-check {worst_spot:.2e} (< 1e-5)", t0)


# -- 10 ---------------------------------------------------------------------

def check_prefactor_boundedness(tier="full") -> CheckResult:
    t0 = time.time()
    f = WaveFunction.delta(0, "A")
    gammas = (0.5, 0.9, 0.99) if tier == "full" else (0.5, 0.9)
    times = np.geomspace(1e2, 1e4, 25) if tier == "full" else \
        np.geomspace(1e2, 1e3, 10)
    rows = constant_dependence_scan([HoppingParams(1.0, g) for g in gammas],
                                    f, times)
    ratios = np.array([r["ratio"] for r in rows])
    spread = float(ratios.max() / ratios.min())
    # The theoretical prefactor is an upper-bound shape: acceptance is that
    # the fitted constant never outruns it (spread of the ratio stays O(1)).
    ok = np.all(np.isfinite(ratios)) and spread < 5.0
    detail = ", ".join(f"g2={g}: ratio {r['ratio']:.3f}"
                       for g, r in zip(gammas, rows))
    return _result("prefactor_boundedness", ok,
                   detail + f"; spread {spread:.2f} (< 5)", t0)


# -- 11 ---------------------------------------------------------------------

def check_arc_bounds(tier="full") -> CheckResult:
    t0 = time.time()
    rng = np.random.default_rng(11)
    p = HoppingParams(1.0, 0.5)
    worst = -np.inf
    for _ in range(100):
        y = rng.uniform(0.05, math.pi - 0.05)
        t = float(np.exp(rng.uniform(0.0, math.log(100.0))))
        a, b = band_width_functions(np.array([y]), p)
        parts = pv_oscillatory_contour(float(a[0]) * t, float(b[0]) * t,
                                       parts=True)
        worst = max(worst,
                    abs(parts.arc_b) - math.pi / (1.0 + float(b[0]) * t),
                    abs(parts.arc_a) - math.pi / (1.0 + float(a[0]) * t))
    return _result("arc_bounds", worst <= 0.0,
                   f"max (|arc| - pi/(1+radius)) = {worst:.3e} (<= 0) "
                   f"over 100 samples", t0)


# -- 12 ---------------------------------------------------------------------

def check_no_embedded_eigenvalues(tier="full") -> CheckResult:
    """Spectrum of the N-cell truncation. The finite chain carries a boundary
    mode at *each* end in the nontrivial phase; the half-line statement is the
    rank of the gap eigenspace restricted to the left quarter of the chain."""
    t0 = time.time()
    sizes = (100, 200, 400) if tier == "full" else (100, 200)
    msgs, ok = [], True
    for g2, topo in ((2.0, True), (1.1, True), (0.5, False)):
        p = HoppingParams(1.0, g2)
        left_ranks, gap_dists = [], []
        for n in sizes:
            ev, vec = np.linalg.eigh(truncated_hamiltonian(p, n).toarray())
            margin = 5.0 / n
            mask = np.abs(ev) < p.gamma_minus - margin
            ok &= not np.any(np.abs(ev) > p.gamma_plus + margin)
            if np.any(mask):
                sv = np.linalg.svd(vec[: n // 2, mask], compute_uv=False)
                left_ranks.append(int(np.sum(sv > 0.1)))
                gap_dists.append(float(np.max(np.abs(ev[mask]))))
            else:
                left_ranks.append(0)
                gap_dists.append(0.0)
        if topo:
            ok &= all(r == 1 for r in left_ranks)
            # splitting halves at least every doubling until the float floor
            ok &= all(d2 < max(d1 * 0.5, 1e-13)
                      for d1, d2 in zip(gap_dists, gap_dists[1:]))
            msgs.append(f"g2={g2}: one left-edge gap mode, splitting " +
                        ", ".join(f"{d:.1e}" for d in gap_dists))
        else:
            ok &= all(r == 0 for r in left_ranks)
            msgs.append(f"g2={g2}: no gap eigenvalues")
    return _result("no_embedded_eigenvalues", ok, "; ".join(msgs), t0)


# (check, needs the analytic propagator) -- the latter are skipped when the
# battery is pointed at a gapless model.
ALL_CHECKS = [
    (check_edge_state_kernel, False),
    (check_symmetries, False),
    (check_dispersion_identities, False),
    (check_q_star, False),
    (check_closed_forms, False),
    (check_resolvent_oracle, False),
    (check_propagator_oracle, True),
    (check_type_terms, True),
    (check_decay_envelopes, True),
    (check_prefactor_boundedness, False),
    (check_arc_bounds, False),
    (check_no_embedded_eigenvalues, False),
]


def run_battery(tier: str = "quick", names=None, gapless: bool = False,
                spec=None):
    """Run the acceptance checks; failures are reported, never raised.

    ``spec`` overrides the quadrature used by the propagator-equivalence
    check, so a deliberately loosened tolerance shows up as a named failure.
    """
    results = []
    for fn, analytic in ALL_CHECKS:
        name = fn.__name__.removeprefix("check_")
        if names and name not in names:
            continue
        if gapless and analytic:
            results.append(CheckResult(name, True, "skipped: γ₋ = 0",
                                       0.0, skipped=True))
            continue
        t0 = time.time()
        try:
            if fn is check_propagator_oracle:
                results.append(fn(tier, spec=spec))
            else:
                results.append(fn(tier))
        except SSHDispersiveError as exc:
            results.append(CheckResult(name, False,
                                       f"error: {exc}", time.time() - t0))
    return results
