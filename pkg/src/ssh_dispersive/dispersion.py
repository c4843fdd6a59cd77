"""Dispersion relation k, symbol h, the eta change of variables, the analytic
continuation q*(omega), critical-point geometry of k, and Chebyshev evaluation.

Conventions:
  k(y)   = sqrt(gamma1^2 + |gamma2|^2 + 2 gamma1 |gamma2| cos y)
  h(q)   = gamma1 + gamma2 e^{-iq}
  eta(l) = (l^2 - gamma1^2 - |gamma2|^2) / (2 gamma1 |gamma2|)

q*(omega) is the unique solution of k^2(q) = omega in the closed lower
half-strip D u Gamma4 (D = {-pi < Re q < pi, Im q < 0},
Gamma4 = {Re q = pi, Im q < 0}); its boundary values on the positive band cut
are q*((l +- i0)^2) = +- q*_l with q*_l = sgn(l) arccos(eta(|l|)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import DomainError, GaplessModel, OnBandCut
from .model import HoppingParams

_CLAMP_SLOP = 1e-12


def k_of(y, p: HoppingParams):
    y = np.asarray(y, dtype=float)
    val = np.sqrt(p.gamma1 ** 2 + p.abs_gamma2 ** 2 + 2.0 * p.g * np.cos(y))
    return val if val.ndim else float(val)


def k2_complex(q, p: HoppingParams):
    """k^2 continued to complex q."""
    q = np.asarray(q, dtype=complex)
    val = p.gamma1 ** 2 + p.abs_gamma2 ** 2 + 2.0 * p.g * np.cos(q)
    return val if val.ndim else complex(val)


def h_of(q, p: HoppingParams):
    q = np.asarray(q, dtype=complex)
    val = p.gamma1 + p.gamma2 * np.exp(-1j * q)
    return val if val.ndim else complex(val)


def eta_of(lam, p: HoppingParams):
    """Real eta on the band |lambda| in [gamma_-, gamma_+], clamped to [-1, 1]."""
    lam = np.asarray(lam, dtype=float)
    eta = (lam ** 2 - p.gamma1 ** 2 - p.abs_gamma2 ** 2) / (2.0 * p.g)
    if np.any(np.abs(eta) > 1.0 + _CLAMP_SLOP):
        raise DomainError("lambda outside the spectral bands")
    eta = np.clip(eta, -1.0, 1.0)
    return eta if eta.ndim else float(eta)


def eta_complex(omega, p: HoppingParams):
    """eta as a function of omega = z^2, no domain check."""
    omega = np.asarray(omega, dtype=complex)
    val = (omega - p.gamma1 ** 2 - p.abs_gamma2 ** 2) / (2.0 * p.g)
    return val if val.ndim else complex(val)


def q_star_lambda(lam: float, p: HoppingParams) -> float:
    """Boundary inverse of the dispersion: sgn(lambda) arccos(eta(|lambda|))."""
    lam = float(lam)
    a = abs(lam)
    if not (p.gamma_minus - _CLAMP_SLOP <= a <= p.gamma_plus + _CLAMP_SLOP):
        raise DomainError("lambda outside the spectral bands")
    return math.copysign(math.acos(eta_of(a, p)), lam)


def q_star_boundary(lam: float, side, p: HoppingParams) -> float:
    """Side limits on the cut: +q*_lambda for +i0 and -q*_lambda for -i0."""
    s = {"+i0": 1, "-i0": -1, 1: 1, -1: -1}.get(side)
    if s is None:
        raise DomainError("side must be '+i0' or '-i0'")
    return s * q_star_lambda(lam, p)


def _arccos_continued(w: complex) -> complex:
    """arccos continued off [-1, 1]: i * log(w - sqrt(w^2 - 1)) with the
    product-of-half-angles square-root branch."""
    w = complex(w)
    u, v = w - 1.0, w + 1.0
    root = math.sqrt(abs(u) * abs(v)) * np.exp(
        0.5j * (np.angle(u) + np.angle(v)))
    return 1j * np.log(w - root)


def q_star_complex(omega: complex, p: HoppingParams) -> complex:
    """Unique q in D u Gamma4 with k^2(q) = omega, for omega off the cut
    [gamma_-^2, gamma_+^2]."""
    omega = complex(omega)
    scale = max(1.0, p.gamma_plus ** 2)
    if abs(omega.imag) < 1e-14 * scale and \
            p.gamma_minus ** 2 - 1e-14 * scale <= omega.real <= p.gamma_plus ** 2 + 1e-14 * scale:
        raise OnBandCut("omega on the band cut; use q_star_boundary")
    base = _arccos_continued(eta_complex(omega, p))
    tol = 1e-10
    candidates = []
    for c in (base, -base):
        for shift in (-2.0 * math.pi, 0.0, 2.0 * math.pi):
            q = c + shift
            if q.imag >= -1e-15:
                continue
            re = q.real
            if -math.pi + tol < re <= math.pi + tol:
                if re > math.pi:
                    q = complex(math.pi, q.imag)
                candidates.append(q)
    good = [q for q in candidates
            if abs(k2_complex(q, p) - omega) <= 1e-8 * max(abs(omega), scale)]
    if not good:
        raise DomainError(f"no admissible branch for omega={omega}")
    best = good[0]
    for q in good[1:]:
        if abs(q - best) > 1e-8:
            raise DomainError(f"branch selection ambiguous for omega={omega}")
    return best


def k_derivatives(y, order: int, p: HoppingParams):
    """Closed-form derivatives k', k'', k''', k'''' on [0, pi]."""
    y = np.asarray(y, dtype=float)
    g = p.g
    k = np.sqrt(p.gamma1 ** 2 + p.abs_gamma2 ** 2 + 2.0 * g * np.cos(y))
    s, c = np.sin(y), np.cos(y)
    if order == 1:
        val = -g * s / k
    elif order == 2:
        val = -g * (c / k + g * s ** 2 / k ** 3)
    elif order == 3:
        val = -g * (3 * g * c * s / k ** 3 + 3 * g ** 2 * s ** 3 / k ** 5 - s / k)
    elif order == 4:
        val = -g * (15 * g ** 3 * s ** 4 / k ** 7
                    + 18 * g ** 2 * s ** 2 * c / k ** 5
                    + g * (3 * c ** 2 - 4 * s ** 2) / k ** 3
                    - c / k)
    else:
        raise DomainError("order must be 1..4")
    return val if val.ndim else float(val)


@dataclass(frozen=True)
class PhaseGeometry:
    """Critical points and constants of k on [0, pi]."""
    y_M: float      # zero of k''
    y_L12: float    # |k'| = |k''|, left of y_M
    y_R12: float    # |k'| = |k''|, right of y_M
    y_L23: float    # |k''| = |k'''|, left of y_M
    y_R23: float    # |k''| = |k'''|, right of y_M
    c_A: float      # A(y) >= c_A (pi - y)^2
    c_B: float      # B(y) >= c_B y^2
    v_max: float    # sup |k'| = min{gamma1, |gamma2|}


def _g_equation_12_left(y: float) -> float:
    return (1.0 + math.cos(y) ** 2 - math.sin(2 * y)) / (math.sin(y) - math.cos(y))


def _g_equation_12_right(y: float) -> float:
    return -(1.0 + math.cos(y) ** 2 + math.sin(2 * y)) / (math.sin(y) + math.cos(y))


def _g_equation_23_left(y: float) -> float:
    s, c = math.sin(y), math.cos(y)
    return s * (s + 3 * c + math.sqrt(9 + 4 * s * s - 3 * math.sin(2 * y))) \
        / (2 * (s - c)) - 2 * c


def _g_equation_23_right(y: float) -> float:
    s, c = math.sin(y), math.cos(y)
    return s * (3 * c - s - math.sqrt(9 + 4 * s * s + 3 * math.sin(2 * y))) \
        / (2 * (s + c)) - 2 * c


def phase_geometry(p: HoppingParams) -> PhaseGeometry:
    if p.is_gapless:
        raise GaplessModel("phase geometry undefined for gamma1 == |gamma2|")
    if p.abs_gamma2 > p.gamma1:
        y_m = math.acos(-p.gamma1 / p.abs_gamma2)
    else:
        y_m = math.acos(-p.abs_gamma2 / p.gamma1)

    eps = 1e-9
    G = p.G

    def root(fn, a, b):
        return bisect(lambda y: fn(y) - G, a, b, xtol=1e-12)

    y_l12 = root(_g_equation_12_left, math.pi / 4 + eps, math.pi / 2)
    y_r12 = root(_g_equation_12_right, 3 * math.pi / 4 + eps, math.pi - eps)
    y_l23 = root(_g_equation_23_left, math.pi / 4 + eps, 3 * math.pi / 4 - eps)
    y_r23 = root(_g_equation_23_right, 3 * math.pi / 4 + eps, math.pi - eps)

    c = 2.0 * p.v_max / math.pi ** 2
    return PhaseGeometry(y_M=y_m, y_L12=y_l12, y_R12=y_r12,
                         y_L23=y_l23, y_R23=y_r23,
                         c_A=c, c_B=c, v_max=p.v_max)


def band_width_functions(y, p: HoppingParams):
    """A(y) = k(y) - gamma_-, B(y) = gamma_+ - k(y), in the cancellation-free
    forms 4g cos^2(y/2)/(k + gamma_-) and 4g sin^2(y/2)/(gamma_+ + k)."""
    y = np.asarray(y, dtype=float)
    k = k_of(y, p)
    a = 4.0 * p.g * np.cos(0.5 * y) ** 2 / (k + p.gamma_minus)
    b = 4.0 * p.g * np.sin(0.5 * y) ** 2 / (p.gamma_plus + k)
    return a, b


def chebyshev_T(n: int, x):
    """First-kind Chebyshev polynomial via the trig identity
    T_n(cos theta) = cos(n theta)."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + _CLAMP_SLOP):
        raise DomainError("chebyshev_T argument outside [-1, 1]")
    val = np.cos(n * np.arccos(np.clip(x, -1.0, 1.0)))
    return val if val.ndim else float(val)
