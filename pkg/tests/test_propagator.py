import numpy as np
import pytest
from scipy.special import j0

from ssh_dispersive import (EvolutionRequest, GaplessModel, HoppingParams,
                            QuadratureSpec, WaveFunction, bulk_propagate,
                            edge_correction, edge_correction_direct,
                            evolve_ac, evolve_negative_band,
                            evolve_positive_band, project_ac, type_I, type_II,
                            type_III)
from ssh_dispersive.dispersion import k_of

from oracles import (dense_bulk_hamiltonian, dense_edge_hamiltonian,
                     expm_evolve, from_site_vector, spectral_projector_ac,
                     to_site_vector)

SPEC = QuadratureSpec(rel_tol=1e-8, max_panels=60000)


# -- whole-line propagator ---------------------------------------------------

def test_bulk_propagate_against_two_sided_oracle(rng):
    p = HoppingParams(1.0, 1.5 * np.exp(0.3j))
    f = WaveFunction(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    t = 10.0
    n_half = 60
    h = dense_bulk_hamiltonian(p, n_half)
    v0 = to_site_vector(f, 2 * n_half, cell_offset=n_half)
    ref = from_site_vector(expm_evolve(h, v0, [t])[0], (-20, 20),
                           cell_offset=n_half)
    got = bulk_propagate(f, t, p, (-20, 20), SPEC)
    assert np.max(np.abs(got.window(-20, 20) - ref)) < 1e-6


def test_bulk_propagate_t0_is_identity(rng):
    p = HoppingParams(1.0, 0.7)
    f = WaveFunction(rng.normal(size=(3, 2)))
    out = bulk_propagate(f, 0.0, p, (-5, 8), SPEC)
    want = np.zeros((14, 2), dtype=complex)
    want[5:8] = f.cells
    assert np.max(np.abs(out.window(-5, 8) - want)) < 1e-8


# -- half-line propagator ----------------------------------------------------

def _halfline_reference(p, f, times, window, n_lat=300, ac=True):
    h = dense_edge_hamiltonian(p, n_lat)
    v0 = to_site_vector(f, n_lat)
    if ac:
        v0 = spectral_projector_ac(h, v0, p.gamma_minus)
    return [from_site_vector(v, window)
            for v in expm_evolve(h, v0, times)]


@pytest.mark.parametrize("gamma2", [0.5, 2.0, 1.6 * np.exp(0.7j)])
def test_evolve_ac_matches_spectral_oracle(gamma2):
    p = HoppingParams(1.0, gamma2)
    f = WaveFunction.delta(0, "A")
    times = (0.0, 1.0, 5.0)
    refs = _halfline_reference(p, f, times, (0, 25))
    outs = evolve_ac(EvolutionRequest(p, f, times, (0, 25), "analytic", SPEC))
    for got, want in zip(outs, refs):
        assert np.max(np.abs(got.window(0, 25) - want)) < 1e-6


def test_band_split_reassembles_projection(rng):
    # P+ f + P- f = (projection onto the continuous subspace of) f at t=0
    p = HoppingParams(1.0, 2.0)
    f = WaveFunction(rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2)))
    pos = evolve_positive_band(f, 0.0, p, (0, 30), SPEC)
    neg = evolve_negative_band(f, 0.0, p, (0, 30), SPEC)
    want = project_ac(f, p, 400).window(0, 30)
    got = pos.window(0, 30) + neg.window(0, 30)
    assert np.max(np.abs(got - want)) < 1e-6


def test_edge_correction_collapsed_equals_direct():
    # the single smooth-amplitude oscillatory form must agree with the slow
    # six-term assembly (principal values and half-residues kept separate)
    p = HoppingParams(1.0, 1.4 * np.exp(0.5j))
    f = WaveFunction.delta(1, "A")
    t = 2.0
    loose = QuadratureSpec(rel_tol=1e-6, max_panels=120000)
    fast = edge_correction(f, t, p, (0, 5), SPEC)
    slow = edge_correction_direct(f, t, p, (0, 5), loose)
    assert np.max(np.abs(fast.window(0, 5) - slow.window(0, 5))) < 1e-5


def test_edge_correction_terms_do_not_cancel():
    # dropping the principal-value group changes the answer at O(0.1):
    # the correction is a genuine interference of all three term groups
    p = HoppingParams(1.0, 1.4)
    f = WaveFunction.delta(1, "A")
    t = 2.0
    loose = QuadratureSpec(rel_tol=1e-6, max_panels=120000)
    full = edge_correction_direct(f, t, p, (0, 2), loose)
    partial = edge_correction_direct(f, t, p, (0, 2), loose,
                                     groups=("density", "smooth"))
    gap = np.max(np.abs(full.window(0, 2) - partial.window(0, 2)))
    assert gap > 1e-2


def test_edge_correction_nonzero_only_with_boundary():
    # far from the boundary the correction decays
    p = HoppingParams(1.0, 0.5)
    f = WaveFunction.delta(0, "A")
    near = edge_correction(f, 1.0, p, (0, 2), SPEC).norm()
    far = edge_correction(f, 1.0, p, (40, 42), SPEC).norm()
    assert near > 10 * far


def test_gapless_model_refused():
    p = HoppingParams(1.0, 1.0)
    with pytest.raises(GaplessModel):
        EvolutionRequest(p, WaveFunction.delta(0), (1.0,), (0, 5), "analytic")


def test_request_validation():
    p = HoppingParams(1.0, 2.0)
    with pytest.raises(Exception):
        EvolutionRequest(p, WaveFunction.delta(0), (1.0,), (0, 5), "bogus")
    with pytest.raises(Exception):
        EvolutionRequest(p, WaveFunction.delta(0), (-1.0,), (0, 5), "oracle")


# -- model integrals ---------------------------------------------------------

def test_type_I_at_t0_is_delta():
    p = HoppingParams(1.0, 0.5)
    one = lambda y: np.ones_like(np.asarray(y, float))
    assert abs(type_I(0, 0.0, one, p, SPEC).value - np.pi) < 1e-9
    assert abs(type_I(2, 0.0, one, p, SPEC).value) < 1e-9


def test_type_I_free_lattice_reduction():
    # gamma2 -> equal hoppings pushed slightly off gapless: for the pure
    # cosine phase, int_0^pi e^{-i k t} cos(0 y) dy relates to Bessel J_0;
    # instead check the generic value against dense lambda-space quadrature
    from scipy.integrate import quad
    from ssh_dispersive.dispersion import eta_of
    p = HoppingParams(1.0, 2.0)
    n, t = 3, 20.0

    def integrand(lam, part):
        eta = eta_of(np.array([lam]), p)[0]
        y = np.arccos(np.clip(eta, -1, 1))
        amp = lam * np.cos(n * y) / (p.g * np.sqrt(max(1e-300, 1 - eta ** 2)))
        v = amp * complex(np.cos(lam * t), -np.sin(lam * t))
        return v.real if part == 0 else v.imag

    ref = complex(*(quad(lambda x: integrand(x, part), p.gamma_minus,
                         p.gamma_plus, limit=2000, epsabs=1e-12)[0]
                    for part in (0, 1)))
    got = type_I(n, t, lambda y: np.ones_like(np.asarray(y, float)), p,
                 SPEC).value
    assert abs(got - ref) < 1e-7 * abs(ref)


def test_type_II_t0_log_weight():
    from scipy.integrate import quad
    p = HoppingParams(1.0, 0.5)
    one = lambda y: np.ones_like(np.asarray(y, float))
    a, b = type_II(1, 0.0, one, p, SPEC)

    def w(y):
        c = float(k_of(np.array([y]), p)[0])
        return np.cos(y) * np.log((p.gamma_plus + c) / (p.gamma_minus + c))

    ref = quad(w, 0, np.pi, limit=400, epsabs=1e-12)[0]
    assert abs((a.value + b.value) - ref) < 1e-8


def test_type_III_holder_term_vanishes_for_constant_weight():
    p = HoppingParams(1.0, 0.5)
    one = lambda y: np.ones_like(np.asarray(y, float))
    _, b = type_III(1, 2.0, one, p, SPEC)
    assert abs(b.value) < 1e-8


def test_type_terms_report_error_estimates():
    p = HoppingParams(1.0, 0.5)
    one = lambda y: np.ones_like(np.asarray(y, float))
    term = type_I(1, 3.0, one, p, SPEC)
    assert term.kind == "I"
    assert term.error_estimate >= 0
