"""Oscillatory and singular integration engine.

Panel-adaptive Gauss-Legendre quadrature for (possibly vector-valued) complex
integrands, Cauchy principal values via singularity subtraction, the
quarter-circle contour evaluator for the inner principal-value integral
pv of e^{-iu}/u over [-At, Bt], and the u^alpha-substituted double integral.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import exp1, sici

from .errors import (AlphaOutOfRange, BudgetExceeded, DegenerateInterval,
                     DomainError, PoleAtEndpoint)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and panel policy."""
    rel_tol: float = 1e-8
    max_panels: int = 20000
    panel_order: int = 16
    split_at_critical_points: bool = True
    pv_excision: float = 1e-6   # scale-relative half-width (test/oracle use only)

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.max_panels < 1:
            raise DomainError("max_panels must be >= 1")
        if self.panel_order < 4:
            raise DomainError("panel_order must be >= 4")
        if not self.pv_excision > 0:
            raise DomainError("pv_excision must be positive")


DEFAULT_SPEC = QuadratureSpec()

_gl_cache: dict = {}


def _gl(order: int):
    if order not in _gl_cache:
        x, w = np.polynomial.legendre.leggauss(order)
        _gl_cache[order] = (x, w)
    return _gl_cache[order]


def _panel_eval(f, a: float, b: float, order: int):
    """Return (coarse, fine) estimates on [a, b]; fine uses 2x the order."""
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    x1, w1 = _gl(order)
    x2, w2 = _gl(2 * order)
    y = np.concatenate([mid + half * x1, mid + half * x2])
    vals = np.asarray(f(y), dtype=complex)
    if vals.ndim == 1:
        vals = vals[:, None]
    v1, v2 = vals[:order], vals[order:]
    coarse = half * (w1[:, None] * v1).sum(axis=0)
    fine = half * (w2[:, None] * v2).sum(axis=0)
    return coarse, fine


def integrate_adaptive(f, a: float, b: float, spec: QuadratureSpec = DEFAULT_SPEC,
                       breakpoints=(), abs_floor: float = 0.0,
                       with_error: bool = False):
    """Adaptive panel integration of a vectorized complex integrand on [a, b].

    ``f`` maps an array of abscissae to an array of values, either (m,) or
    (m, d). ``breakpoints`` seed the initial panel boundaries. The target is
    max-norm error <= rel_tol * max(|integral|, abs_floor).
    """
    if b < a:
        raise DomainError("integration limits must be ordered")
    if b == a:
        return (0.0 + 0j, 0.0) if with_error else 0.0 + 0j
    pts = [a] + sorted(x for x in set(float(x) for x in breakpoints) if a < x < b) + [b]

    heap = []  # (-err, seq, a, b, fine_estimate)
    seq = 0
    total = None
    for lo, hi in zip(pts[:-1], pts[1:]):
        coarse, fine = _panel_eval(f, lo, hi, spec.panel_order)
        err = float(np.max(np.abs(fine - coarse)))
        total = fine if total is None else total + fine
        heapq.heappush(heap, (-err, seq, lo, hi, fine))
        seq += 1

    n_panels = len(heap)
    while True:
        tot_err = -sum(item[0] for item in heap)
        scale = max(float(np.max(np.abs(total))), abs_floor)
        if tot_err <= spec.rel_tol * scale or tot_err == 0.0:
            break
        if n_panels >= spec.max_panels:
            raise BudgetExceeded(
                f"panel budget {spec.max_panels} reached (err {tot_err:.2e}, "
                f"target {spec.rel_tol * scale:.2e})")
        _, _, lo, hi, fine = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        total = total - fine
        for l2, h2 in ((lo, mid), (mid, hi)):
            coarse, f2 = _panel_eval(f, l2, h2, spec.panel_order)
            err = float(np.max(np.abs(f2 - coarse)))
            total = total + f2
            heapq.heappush(heap, (-err, seq, l2, h2, f2))
            seq += 1
        n_panels += 1

    if total.shape == (1,):
        total = total[0]
    if with_error:
        return total, tot_err
    return total


def graded_breakpoints(a: float, b: float, toward: float, scale: float,
                       floor: float = 1e-12, factor: float = 4.0):
    """Geometric panel boundaries inside [a, b] accumulating at ``toward``
    (one of the endpoints), starting at distance ``scale``."""
    pts = []
    d = scale
    while d > floor * max(1.0, abs(b - a)):
        x = toward + d if toward <= a else toward - d
        if a < x < b:
            pts.append(x)
        d /= factor
    return pts


def oscillatory_integral(amplitude, phase, t: float,
                         spec: QuadratureSpec = DEFAULT_SPEC,
                         a: float = 0.0, b: float = math.pi,
                         breakpoints=(), abs_floor: float = 0.0,
                         with_error: bool = False):
    """integral_a^b amplitude(y) e^{-i t phase(y)} dy.

    Initial panels are seeded from the sampled oscillation count of
    t * phase so that each starting panel carries only a few cycles.
    """
    def f(y):
        amp = np.asarray(amplitude(y), dtype=complex)
        ph = np.exp(-1j * t * np.asarray(phase(y), dtype=float))
        return amp * (ph[:, None] if amp.ndim == 2 else ph)

    bps = list(breakpoints)
    if t != 0.0:
        ys = np.linspace(a, b, 257)
        pv = np.asarray(phase(ys), dtype=float)
        cycles = abs(t) * float(np.sum(np.abs(np.diff(pv)))) / (2 * math.pi)
        n0 = int(min(max(4, math.ceil(cycles / 2.0)), spec.max_panels // 4))
        bps.extend(np.linspace(a, b, n0 + 1)[1:-1])
    return integrate_adaptive(f, a, b, spec, breakpoints=bps,
                              abs_floor=abs_floor, with_error=with_error)


def pv_integral(density, a: float, b: float, pole: float,
                spec: QuadratureSpec = DEFAULT_SPEC, breakpoints=(),
                with_error: bool = False):
    """Cauchy principal value of density(u)/(u - pole) on [a, b] by
    singularity subtraction; density must be (1/2-)Hoelder at the pole."""
    span = b - a
    if not (a < pole < b) or min(pole - a, b - pole) < 1e-13 * max(1.0, span):
        raise PoleAtEndpoint("pole must lie strictly inside the interval")
    d0 = np.asarray(density(np.array([pole])), dtype=complex)[0]
    scalar = d0.ndim == 0

    def f(u):
        dens = np.asarray(density(u), dtype=complex)
        du = u - pole
        return (dens - d0) / (du if dens.ndim == 1 else du[:, None])

    scale = min(pole - a, b - pole)
    bps = [pole]
    bps += graded_breakpoints(a, b, pole, scale / 2.0)
    bps += [2 * pole - x for x in graded_breakpoints(a, b, pole, scale / 2.0)
            if a < 2 * pole - x < b]
    bps += list(breakpoints)
    val, err = integrate_adaptive(f, a, b, spec, breakpoints=bps,
                                  abs_floor=float(np.max(np.abs(d0))) + 1e-300,
                                  with_error=True)
    val = val + d0 * math.log((b - pole) / (pole - a))
    if scalar and np.ndim(val):
        val = complex(val.reshape(()))
    if with_error:
        return val, err
    return val


def pv_integral_excised(density, a: float, b: float, pole: float,
                        half_width: float, spec: QuadratureSpec = DEFAULT_SPEC):
    """Symmetric-excision principal value (test oracle, not the production path)."""
    if not (a < pole - half_width and pole + half_width < b):
        raise PoleAtEndpoint("excision window must fit inside the interval")

    def f(u):
        return np.asarray(density(u), dtype=complex) / (u - pole)

    left = integrate_adaptive(
        f, a, pole - half_width, spec,
        breakpoints=graded_breakpoints(a, pole - half_width, pole - half_width,
                                       (pole - half_width - a) / 2))
    right = integrate_adaptive(
        f, pole + half_width, b, spec,
        breakpoints=graded_breakpoints(pole + half_width, b, pole + half_width,
                                       (b - pole - half_width) / 2))
    return left + right


@dataclass(frozen=True)
class ContourParts:
    residue: complex   # -i pi from the small semicircle
    arc_b: complex     # quarter-circle at radius Byt (right arc)
    arc_a: complex     # quarter-circle at radius Ayt (left arc)
    tail: complex      # real-axis-image segment E1(Ayt) - E1(Byt)

    @property
    def value(self) -> complex:
        return self.residue + self.arc_b + self.arc_a + self.tail


def _arc_integral(x: float, sign: int, spec: QuadratureSpec) -> complex:
    """i * integral_0^{pi/2} exp(sign i x cos th) exp(-x sin th) dth.

    The integrand is boundary-layer concentrated near th = 0 for large x.
    """
    def f(th):
        return 1j * np.exp(sign * 1j * x * np.cos(th) - x * np.sin(th))

    bps = []
    if x > 1.0:
        d = 1.0 / x
        while d < math.pi / 2:
            bps.append(d)
            d *= 2.0
    return integrate_adaptive(f, 0.0, math.pi / 2, spec, breakpoints=bps,
                              abs_floor=1e-300)


def pv_oscillatory_contour(ayt: float, byt: float,
                           spec: QuadratureSpec = DEFAULT_SPEC,
                           parts: bool = False):
    """pv of e^{-iu}/u over [-ayt, byt], evaluated by closing into the lower
    half-plane: -i pi from the small semicircle, two quarter-circle arcs, and
    the decaying segment on the negative imaginary axis (an E1 difference).
    """
    if ayt <= 0.0 or byt <= 0.0:
        raise DegenerateInterval("both half-lengths must be positive")
    out = ContourParts(
        residue=-1j * math.pi,
        arc_b=_arc_integral(byt, -1, spec),
        arc_a=_arc_integral(ayt, +1, spec),
        tail=complex(exp1(ayt) - exp1(byt)),
    )
    return out if parts else out.value


def pv_cos_over_linear(m: int, a: float, b: float, pole: float) -> complex:
    """Closed form of pv integral_a^b cos(m u)/(u - pole) du via Si/Ci."""
    if not (a < pole < b):
        raise PoleAtEndpoint("pole must be interior")
    if m == 0:
        return math.log((b - pole) / (pole - a))
    sl, cl = sici(m * (pole - a))
    sr, cr = sici(m * (b - pole))
    return math.cos(m * pole) * (cr - cl) - math.sin(m * pole) * (sr + sl)


def alpha_substitution_integral(F_prime_kernel, kY: float, upper: float,
                                alpha: float, t: float,
                                spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """integral_0^{(upper-kY)^{1/alpha}} e^{-i u^alpha t} N(u) du with
    N(u) = u^{-1} integral_{kY}^{u^alpha + kY} F'(s) ds.

    The inner integral is evaluated on the unit interval as
    N(u) = u^{alpha-1} integral_0^1 F'(kY + u^alpha v) dv.
    """
    if not (2.0 < alpha <= 3.0):
        raise AlphaOutOfRange("alpha must lie in (2, 3]")
    if not (0.0 <= kY < upper):
        raise DomainError("need 0 <= kY < upper")
    U = (upper - kY) ** (1.0 / alpha)
    vx, vw = _gl(64)
    vnodes = 0.5 * (vx + 1.0)
    vweights = 0.5 * vw

    def amplitude(u):
        s = kY + np.multiply.outer(u ** alpha, vnodes)
        fp = np.asarray(F_prime_kernel(s.ravel()), dtype=complex).reshape(s.shape)
        return (fp @ vweights) * u ** (alpha - 1.0)

    bps = graded_breakpoints(0.0, U, 0.0, U / 4.0)
    return oscillatory_integral(amplitude, lambda u: u ** alpha, t, spec,
                                a=0.0, b=U, breakpoints=bps,
                                abs_floor=1e-300)


def default_alpha(t: float) -> float:
    """alpha = 2 + 1/log(sqrt(2 + t^2)), clipped into (2, 3]."""
    return float(min(3.0, 2.0 + 1.0 / math.log(math.sqrt(2.0 + t * t))))
