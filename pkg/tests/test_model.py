import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ssh_dispersive import (FourierSeries, HoppingParams, NotInTopologicalPhase,
                            WaveFunction, apply_edge_hamiltonian,
                            chiral_conjugate, edge_state, project_ac,
                            winding_number)

from oracles import dense_edge_hamiltonian, to_site_vector, from_site_vector


def test_params_rejects_bad_input():
    with pytest.raises(Exception):
        HoppingParams(0.0, 1.0)
    with pytest.raises(Exception):
        HoppingParams(1.0, 0.0)
    with pytest.raises(Exception):
        HoppingParams(-1.0, 1.0)


def test_derived_quantities():
    p = HoppingParams(1.0, 2.0)
    assert p.gamma_plus == 3.0
    assert p.gamma_minus == 1.0
    assert p.g == 2.0
    assert p.v_max == 1.0
    assert p.is_topological
    assert not HoppingParams(1.0, 0.5).is_topological
    assert not HoppingParams(1.0, 1.0).is_topological


def test_phi_is_principal_argument():
    p = HoppingParams(1.0, -2.0)
    assert np.isclose(p.phi, np.pi)
    assert np.isclose(np.exp(1j * p.phi) * abs(p.gamma2), p.gamma2)


def test_stencil_matches_dense_matrix(rng, complex_phase):
    p = complex_phase
    n = 12
    h = dense_edge_hamiltonian(p, n)
    psi = WaveFunction(rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2)))
    out = apply_edge_hamiltonian(psi, p)
    got = to_site_vector(out, n + 1)[: 2 * n]
    want = h @ to_site_vector(psi, n)
    # the stencil spills one cell past the dense truncation; mask it off
    want[-1] = got[-1]
    assert np.allclose(got, want, atol=1e-14)


def test_dirichlet_convention():
    # cell 0 must not couple to a phantom cell -1
    p = HoppingParams(1.0, 2.0)
    out = apply_edge_hamiltonian(WaveFunction.delta(0, "A"), p)
    assert out.support[0] >= 0


def test_edge_state_annihilated(topological):
    phi = edge_state(topological, 200)
    r = apply_edge_hamiltonian(phi, topological).norm() / phi.norm()
    assert r < 1e-12


def test_edge_state_ratio(topological):
    phi = edge_state(topological, 50)
    ratio = phi.cells[1, 0] / phi.cells[0, 0]
    assert np.isclose(ratio, -topological.gamma1 / np.conj(topological.gamma2))
    assert np.allclose(phi.cells[:, 1], 0.0)


def test_edge_state_requires_topological_phase(trivial):
    with pytest.raises(NotInTopologicalPhase):
        edge_state(trivial, 50)


def test_winding_number():
    assert winding_number(HoppingParams(1.0, 2.0)) == 1
    assert winding_number(HoppingParams(2.0, 1.0)) == 0
    assert winding_number(HoppingParams(1.0, 1.5j)) == 1


def test_project_ac_removes_edge_component(topological, rng):
    psi = WaveFunction(rng.normal(size=(10, 2)) + 1j * rng.normal(size=(10, 2)))
    pac = project_ac(psi, topological, 400)
    phi = edge_state(topological, 400).normalized()
    assert abs(phi.inner(pac)) < 1e-12
    # idempotent
    again = project_ac(pac, topological, 400)
    assert (again - pac).norm() < 1e-10


def test_project_ac_is_identity_in_trivial_phase(trivial, rng):
    psi = WaveFunction(rng.normal(size=(6, 2)))
    assert (project_ac(psi, trivial) - psi).norm() < 1e-14


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_hermiticity_and_chirality(seed):
    rng = np.random.default_rng(seed)
    p = HoppingParams(rng.uniform(0.2, 2.0),
                      rng.uniform(0.2, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi)))
    psi = WaveFunction(rng.normal(size=(8, 2)) + 1j * rng.normal(size=(8, 2)))
    chi = WaveFunction(rng.normal(size=(8, 2)) + 1j * rng.normal(size=(8, 2)))
    assert abs(apply_edge_hamiltonian(psi, p).inner(chi) -
               psi.inner(apply_edge_hamiltonian(chi, p))) < 1e-12
    l = chiral_conjugate(apply_edge_hamiltonian(chiral_conjugate(psi), p))
    assert (l - apply_edge_hamiltonian(psi, p) * (-1.0)).norm() < 1e-12


def test_fourier_series_roundtrip(rng):
    psi = WaveFunction(rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2)))
    f = FourierSeries(psi)
    q = np.linspace(-np.pi, np.pi, 64, endpoint=False)
    vals = f(q)
    coeffs = np.array([np.mean(vals * np.exp(1j * n * q)[:, None], axis=0)
                       for n in range(5)])
    assert np.allclose(coeffs, psi.cells, atol=1e-12)


def test_fourier_series_derivative(rng):
    psi = WaveFunction(rng.normal(size=(4, 2)))
    f = FourierSeries(psi)
    q = np.array([0.3, 1.1])
    h = 1e-6
    fd = (f(q + h) - f(q - h)) / (2 * h)
    assert np.allclose(f.derivative()(q), fd, atol=1e-8)
