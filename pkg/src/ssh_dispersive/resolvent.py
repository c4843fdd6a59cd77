"""Exact resolvent of the half-line Hamiltonian.

The resolvent applied to a finitely supported state splits into the whole-line
(bulk) part, a Fourier-multiplier integral, minus a rank-style edge correction
whose amplitude is the transform of the shifted source evaluated at the complex
momentum q*(z^2). Boundary values on the continuous spectrum are available as
the resolvent jump across the band cut.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .dispersion import k2_complex, q_star_complex, q_star_lambda
from .errors import DomainError, OnBandCut, OnSpectrum
from .model import FourierSeries, HoppingParams, WaveFunction
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_adaptive, pv_integral


def _h(q, p: HoppingParams):
    """Off-diagonal symbol gamma1 + gamma2 e^{-iq}, valid for complex q."""
    return p.gamma1 + p.gamma2 * np.exp(-1j * np.asarray(q))


def _h_bar(q, p: HoppingParams):
    """Analytic continuation of conj(h(q)) from real q: gamma1 + conj(gamma2) e^{iq}."""
    return p.gamma1 + np.conj(p.gamma2) * np.exp(1j * np.asarray(q))


def _check_z(z: complex, p: HoppingParams):
    if z.imag == 0.0:
        if z == 0 and p.is_topological:
            raise OnSpectrum("z = 0 is the edge eigenvalue")
        if p.gamma_minus <= abs(z.real) <= p.gamma_plus:
            raise OnBandCut("z lies on a band; use resolvent_boundary_jump "
                            "for the side limits")


def _q_star_z(z: complex, p: HoppingParams) -> complex:
    z = complex(z)
    if z == 0 and p.is_topological:
        raise OnSpectrum("z = 0 is the edge eigenvalue")
    return q_star_complex(z * z, p)


def J_closed(n: int, z: complex, p: HoppingParams) -> complex:
    """Closed form of (2 pi)^{-1} int_{-pi}^{pi} e^{inq} / (k^2(q - phi) - z^2) dq
    for n >= 0, by residues at the interior pole."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    qs = _q_star_z(z, p)
    return cmath.exp(1j * n * p.phi) * cmath.exp(-1j * n * qs) * 1j / (
        2.0 * p.g * cmath.sin(qs))


def J_quadrature(n: int, z: complex, p: HoppingParams,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """Direct quadrature of the defining integral of J(n; z)."""
    z2 = complex(z) ** 2

    def f(q):
        return np.exp(1j * n * q) / (k2_complex(q - p.phi, p) - z2)

    return integrate_adaptive(f, -math.pi, math.pi, spec,
                              breakpoints=[p.phi - math.pi / 2, p.phi,
                                           p.phi + math.pi / 2]) / (2 * math.pi)


def K_closed(n: int, z: complex, p: HoppingParams) -> complex:
    """K(n; z) = gamma1 J(n; z) + gamma2 J(n-1; z) for n >= 1."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return p.gamma1 * J_closed(n, z, p) + p.gamma2 * J_closed(n - 1, z, p)


def boundary_determinant(z: complex, p: HoppingParams) -> complex:
    """det(I + VU) = 1 - conj(gamma2) K(1; z); zero exactly at the edge
    eigenvalue z = 0 in the topological phase."""
    qs = _q_star_z(z, p)
    return 1.0 - 1j * (cmath.exp(-1j * qs) + p.abs_gamma2 / p.gamma1) / (
        2.0 * cmath.sin(qs))


def _check_offset(f: WaveFunction):
    if f.offset < 0:
        raise DomainError("half-line source must be supported on n >= 0")


def bulk_resolvent_apply(f: WaveFunction, z: complex, p: HoppingParams,
                         window, spec: QuadratureSpec = DEFAULT_SPEC) -> WaveFunction:
    """(H_bulk - z)^{-1} f on the whole line, evaluated on a cell window."""
    z = complex(z)
    _check_z(z, p)
    z2 = z * z
    ft = FourierSeries(f)
    lo, hi = window
    ns = np.arange(lo, hi + 1)

    def integrand(q):
        fv = ft(q)                       # (m, 2)
        hq = _h(q, p)
        denom = k2_complex(q - p.phi, p) - z2
        va = (z * fv[:, 0] + hq * fv[:, 1]) / denom
        vb = (np.conj(hq) * fv[:, 0] + z * fv[:, 1]) / denom
        phases = np.exp(1j * np.multiply.outer(q, ns))   # (m, N)
        return np.concatenate([phases * va[:, None], phases * vb[:, None]], axis=1)

    out = integrate_adaptive(integrand, -math.pi, math.pi, spec,
                             breakpoints=[p.phi - math.pi / 2, p.phi,
                                          p.phi + math.pi / 2]) / (2 * math.pi)
    cells = np.stack([out[:len(ns)], out[len(ns):]], axis=1)
    return WaveFunction(cells, offset=lo)


def edge_resolvent_apply(f: WaveFunction, z: complex, p: HoppingParams,
                         window, spec: QuadratureSpec = DEFAULT_SPEC) -> WaveFunction:
    """The boundary-induced correction subtracted from the bulk resolvent to
    produce the half-line resolvent."""
    _check_offset(f)
    z = complex(z)
    _check_z(z, p)
    z2 = z * z
    qs = _q_star_z(z, p)
    c = FourierSeries(f).shifted()(qs + p.phi)           # (2,)
    h1 = complex(_h(qs + p.phi, p))
    h1_bar = complex(_h_bar(qs + p.phi, p))
    lo, hi = window
    ns = np.arange(lo, hi + 1)

    def integrand(q):
        hq = _h(q, p)
        denom = k2_complex(q - p.phi, p) - z2
        va = (z * hq / h1 * c[0] + hq * c[1]) / denom
        vb = (h1_bar * c[0] + z * c[1]) / denom
        phases = np.exp(1j * np.multiply.outer(q, ns + 1))
        return np.concatenate([phases * va[:, None], phases * vb[:, None]], axis=1)

    out = integrate_adaptive(integrand, -math.pi, math.pi, spec,
                             breakpoints=[p.phi - math.pi / 2, p.phi,
                                          p.phi + math.pi / 2]) / (2 * math.pi)
    cells = np.stack([out[:len(ns)], out[len(ns):]], axis=1)
    return WaveFunction(cells, offset=lo)


def resolvent_apply(f: WaveFunction, z: complex, p: HoppingParams,
                    window, spec: QuadratureSpec = DEFAULT_SPEC) -> WaveFunction:
    """Half-line resolvent (H - z)^{-1} f on a cell window (bulk minus edge)."""
    return bulk_resolvent_apply(f, z, p, window, spec) - \
        edge_resolvent_apply(f, z, p, window, spec)


def _pv_ratio(pole: float, lam: float, p: HoppingParams):
    """Vectorized (q - pole) / (k^2(q - phi) - lam^2) with the removable limit
    filled in near the pole."""
    lam2 = lam * lam
    d1 = -2.0 * p.g * math.sin(pole - p.phi)
    d2 = -2.0 * p.g * math.cos(pole - p.phi)

    def ratio(q):
        q = np.asarray(q, dtype=float)
        d = q - pole
        out = np.empty(q.shape, dtype=complex)
        near = np.abs(d) < 1e-7
        far = ~near
        out[far] = d[far] / (k2_complex(q[far] - p.phi, p).real - lam2)
        out[near] = 1.0 / (d1 + 0.5 * d2 * d[near])
        return out

    return ratio


def resolvent_boundary_jump(lam: float, f: WaveFunction, p: HoppingParams,
                            window, spec: QuadratureSpec = DEFAULT_SPEC) -> WaveFunction:
    """Jump R(lam + i0) - R(lam - i0) applied to f, for lam inside a band.

    Assembled from the Plemelj residues of the bulk part and the two side
    limits of the edge correction, each of which combines a two-pole principal
    value in momentum with its half-residue terms.
    """
    _check_offset(f)
    lam = float(lam)
    qsl = q_star_lambda(lam, p)       # signed; in (0, pi) up to sign
    qa = abs(qsl)
    sgn = 1.0 if lam > 0 else -1.0    # z -> z^2 flips the cut side for lam < 0
    if min(qa, math.pi - qa) < 1e-8:
        raise OnSpectrum("lambda too close to a band edge")
    ft = FourierSeries(f)
    sft = ft.shifted()
    lo, hi = window
    ns = np.arange(lo, hi + 1)
    denom_res = 2.0 * p.g * math.sin(qa)

    def numerator(q, va_coeff, vb_coeff):
        hq = _h(q, p)
        return np.array([lam * va_coeff[0] + hq * va_coeff[1],
                         np.conj(hq) * vb_coeff[0] + lam * vb_coeff[1]])

    # Bulk jump: i * sum_s e^{in(s qa + phi)} M(s qa + phi) f~(s qa + phi) / (2g sin qa)
    jump = np.zeros((len(ns), 2), dtype=complex)
    for s in (1, -1):
        qpt = s * qa + p.phi
        fv = ft(qpt)
        hq = complex(_h(qpt, p))
        va = lam * fv[0] + hq * fv[1]
        vb = np.conj(hq) * fv[0] + lam * fv[1]
        phase = np.exp(1j * ns * qpt)
        jump[:, 0] += sgn * 1j * phase * va / denom_res
        jump[:, 1] += sgn * 1j * phase * vb / denom_res

    # Edge jump: E+ - E- with side-dependent amplitude c_pm = (Sf)~(+-qa + phi).
    edge = np.zeros((len(ns), 2), dtype=complex)
    for side in (1, -1):
        # side = +1 is the z = lam + i0 limit, whose boundary momentum is the
        # signed q*_lambda; side = -1 mirrors it.
        c = sft(side * qsl + p.phi)
        h1 = complex(_h(side * qsl + p.phi, p))
        h1_bar = complex(_h_bar(side * qsl + p.phi, p))

        vb_const = complex(h1_bar * c[0] + lam * c[1])

        def b_vec(q):
            hq = _h(q, p)
            va = lam * hq / h1 * c[0] + hq * c[1]
            return va, np.broadcast_to(vb_const, va.shape)

        # Principal value over [phi - pi, phi + pi], poles at phi +- qa.
        pv = np.zeros((len(ns), 2), dtype=complex)
        for (a, b, pole) in ((p.phi - math.pi, p.phi, p.phi - qa),
                             (p.phi, p.phi + math.pi, p.phi + qa)):
            ratio = _pv_ratio(pole, lam, p)

            def density(q):
                va, vb = b_vec(q)
                r = ratio(q)
                phases = np.exp(1j * np.multiply.outer(q, ns + 1))
                return np.concatenate([phases * (va * r)[:, None],
                                       phases * (vb * r)[:, None]], axis=1)

            val = pv_integral(density, a, b, pole, spec)
            pv[:, 0] += val[:len(ns)]
            pv[:, 1] += val[len(ns):]

        res = np.zeros((len(ns), 2), dtype=complex)
        for s in (1, -1):
            qpt = s * qa + p.phi
            va, vb = b_vec(np.array([qpt]))
            phase = np.exp(1j * (ns + 1) * qpt)
            res[:, 0] += phase * complex(va[0]) / denom_res
            res[:, 1] += phase * vb_const / denom_res

        # E^s carries s * sgn(lam) * i pi on the half-residues, so in E+ - E-
        # the residue blocks add (with the cut orientation) while the
        # principal values difference.
        edge += (side * pv + sgn * 1j * math.pi * res) / (2 * math.pi)

    return WaveFunction(jump - edge, offset=lo)
