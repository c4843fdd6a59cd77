import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.special import sici

from ssh_dispersive import (BudgetExceeded, DegenerateInterval,
                            QuadratureSpec, alpha_substitution_integral,
                            default_alpha, graded_breakpoints,
                            integrate_adaptive, oscillatory_integral,
                            pv_integral, pv_oscillatory_contour)
from ssh_dispersive.quadrature import pv_integral_excised


def test_spec_validation():
    with pytest.raises(Exception):
        QuadratureSpec(rel_tol=0.0)
    with pytest.raises(Exception):
        QuadratureSpec(max_panels=0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_adaptive_matches_scipy_on_rough_functions(seed):
    rng = np.random.default_rng(seed)
    a, b = sorted(rng.uniform(-3, 3, 2))
    if b - a < 0.1:
        b = a + 0.1
    w = rng.uniform(1, 30)

    def f(x):
        return np.cos(w * np.asarray(x)) / (1 + np.asarray(x) ** 2)

    mine = integrate_adaptive(f, a, b, QuadratureSpec(rel_tol=1e-12),
                              abs_floor=1.0)
    ref = quad(lambda x: float(f(x)), a, b, limit=500, epsabs=1e-13)[0]
    assert abs(mine - ref) <= 1e-10 * max(1.0, abs(ref))


def test_adaptive_vector_integrand():
    def f(x):
        x = np.asarray(x)
        return np.stack([np.sin(x), np.cos(3 * x), x ** 4], axis=-1)

    v = integrate_adaptive(f, 0.0, 2.0, QuadratureSpec(rel_tol=1e-12))
    assert np.allclose(v, [1 - math.cos(2), math.sin(6) / 3, 32 / 5],
                       atol=1e-11)


def test_budget_exceeded():
    spec = QuadratureSpec(rel_tol=1e-14, max_panels=4)
    with pytest.raises(BudgetExceeded):
        integrate_adaptive(lambda x: np.abs(np.asarray(x)) ** 0.1,
                           -1.0, 1.0, spec)


def test_graded_breakpoints_cluster_toward_target():
    pts = np.sort(graded_breakpoints(0.0, 1.0, toward=0.0, scale=0.1))
    assert pts[0] > 0 and pts[-1] < 1
    assert pts[0] < 1e-6  # geometric refinement reaches the target


def test_oscillatory_integral_against_closed_form():
    # int_0^pi e^{-i t cos y} dy = pi J_0(t)
    from scipy.special import j0
    spec = QuadratureSpec(rel_tol=1e-12)
    for t in (0.0, 3.0, 50.0, 400.0):
        v = oscillatory_integral(lambda y: np.ones_like(np.asarray(y, float)),
                                 lambda y: np.cos(np.asarray(y, float)),
                                 t, spec)
        assert abs(v - np.pi * j0(t)) < 1e-10


def test_pv_integral_log_kernel():
    # PV int_0^2 1/(x-1) dx = 0; with density x: = 2
    spec = QuadratureSpec(rel_tol=1e-12)
    one = lambda x: np.ones_like(np.asarray(x, float))
    assert abs(pv_integral(one, 0.0, 2.0, 1.0, spec)) < 1e-11
    ident = lambda x: np.asarray(x, float)
    assert abs(pv_integral(ident, 0.0, 2.0, 1.0, spec) - 2.0) < 1e-11


def test_pv_integral_asymmetric_interval():
    # PV int_0^3 cos(x)/(x-1) dx via sici closed form
    spec = QuadratureSpec(rel_tol=1e-12)
    v = pv_integral(lambda x: np.cos(np.asarray(x, float)), 0.0, 3.0, 1.0,
                    spec)
    s2, c2 = sici(2.0)
    s1, c1 = sici(1.0)
    ref = math.cos(1.0) * (c2 - c1) - math.sin(1.0) * (s2 + s1)
    assert abs(v - ref) < 1e-10


def test_pv_excised_converges_to_subtracted():
    spec = QuadratureSpec(rel_tol=1e-12)
    f = lambda x: np.exp(-np.asarray(x, float) ** 2)
    exact = pv_integral(f, -1.0, 2.0, 0.5, spec)
    errs = [abs(pv_integral_excised(f, -1.0, 2.0, 0.5, eps, spec) - exact)
            for eps in (1e-3, 1e-4, 1e-5)]
    assert errs[2] < errs[0]
    assert errs[2] < 1e-4


def test_contour_decomposition_identity():
    # residue + arcs + tails must reproduce the sine/cosine-integral value of
    # PV int_{-a}^{b} e^{-iu}/u du
    for a, b in ((2.0, 5.0), (0.3, 40.0), (7.0, 0.9)):
        parts = pv_oscillatory_contour(a, b, parts=True)
        sb, cb = sici(b)
        sa, ca = sici(a)
        ref = complex(cb - ca, -(sb + sa))
        assert abs(parts.value - ref) < 1e-12


def test_contour_arc_bounds_scale():
    for a, b in ((1.0, 1.0), (10.0, 0.5), (200.0, 300.0)):
        parts = pv_oscillatory_contour(a, b, parts=True)
        assert abs(parts.arc_a) <= math.pi / (1 + a)
        assert abs(parts.arc_b) <= math.pi / (1 + b)


def test_contour_rejects_nonpositive_radii():
    with pytest.raises(DegenerateInterval):
        pv_oscillatory_contour(0.0, 1.0)


def test_alpha_substitution_weighted_integral():
    # after substituting s = u^alpha the outer integral collapses to
    # (1/alpha) int_0^{upper-kY} e^{-ist} (F(kY+s) - F(kY))/s ds; check with
    # F' = cos against direct quadrature
    alpha, kY, upper, t = 2.5, 0.5, 1.5, 1.0

    def fp(u):
        return np.cos(np.asarray(u, float))

    mine = alpha_substitution_integral(fp, kY, upper, alpha, t)

    def ref_part(s, part):
        amp = (math.sin(kY + s) - math.sin(kY)) / s
        v = complex(math.cos(s * t), -math.sin(s * t)) * amp
        return v.real if part == 0 else v.imag

    ref = complex(*(quad(lambda s: ref_part(s, part), 0.0, upper - kY,
                         epsabs=1e-13)[0] for part in (0, 1))) / alpha
    assert abs(mine - ref) < 1e-9


def test_default_alpha_limits():
    assert default_alpha(0.0) == 3.0
    a = default_alpha(1e6)
    assert 2.0 < a < 2.1
