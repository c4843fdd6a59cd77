"""Lattice states, the bulk/edge SSH Hamiltonians, edge state and chiral symmetry.

A state assigns a pair of complex amplitudes (A, B) to each unit cell n. The
half-line Hamiltonian acts with the stencil

    (H psi)_n = [ gamma1 psi_n^B + gamma2 psi_{n-1}^B ,
                  gamma1 psi_n^A + conj(gamma2) psi_{n+1}^A ]

with the boundary convention psi_{-1} = 0.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotInTopologicalPhase

_SITE_A = 0
_SITE_B = 1


class HoppingParams:
    """Model parameters gamma1 > 0 (in-cell) and gamma2 != 0 (out-of-cell),
    plus the derived constants used everywhere else."""

    __slots__ = ("gamma1", "gamma2", "abs_gamma2", "gamma_plus", "gamma_minus",
                 "phi", "phase", "G", "g", "v_max")

    def __init__(self, gamma1: float, gamma2: complex):
        gamma1 = float(gamma1)
        gamma2 = complex(gamma2)
        if not gamma1 > 0:
            raise DomainError("gamma1 must be positive")
        if gamma2 == 0:
            raise DomainError("gamma2 must be nonzero")
        self.gamma1 = gamma1
        self.gamma2 = gamma2
        self.abs_gamma2 = abs(gamma2)
        self.gamma_plus = gamma1 + self.abs_gamma2
        self.gamma_minus = abs(self.abs_gamma2 - gamma1)
        self.phi = cmath.phase(gamma2)
        self.phase = gamma2 / self.abs_gamma2
        self.G = self.abs_gamma2 / gamma1 + gamma1 / self.abs_gamma2
        self.g = gamma1 * self.abs_gamma2
        self.v_max = min(gamma1, self.abs_gamma2)

    @property
    def is_topological(self) -> bool:
        return self.abs_gamma2 > self.gamma1

    @property
    def is_gapless(self) -> bool:
        return self.gamma_minus == 0.0

    def conjugated(self) -> "HoppingParams":
        """Parameters of the entrywise-conjugated Hamiltonian (gamma2 -> conj)."""
        return HoppingParams(self.gamma1, self.gamma2.conjugate())

    def key(self):
        return (self.gamma1, self.gamma2)

    def __eq__(self, other):
        return isinstance(other, HoppingParams) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"HoppingParams(gamma1={self.gamma1!r}, gamma2={self.gamma2!r})"


class WaveFunction:
    """Finite-support element of l^2 with two complex amplitudes per cell.

    ``cells[j]`` holds the (A, B) pair of cell ``offset + j``. Amplitudes
    outside the stored range are zero. Half-line states have offset >= 0;
    a negative offset gives the two-sided (bulk) analog.
    """

    __slots__ = ("cells", "offset")

    def __init__(self, cells, offset: int = 0):
        arr = np.atleast_2d(np.asarray(cells, dtype=complex))
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise DomainError("cells must be an (N, 2) array of (A, B) amplitudes")
        self.cells = arr
        self.offset = int(offset)

    # -- constructors -----------------------------------------------------
    @staticmethod
    def delta(cell: int, site: str = "A", amplitude: complex = 1.0) -> "WaveFunction":
        pair = [0.0, 0.0]
        pair[_SITE_A if site.upper() == "A" else _SITE_B] = amplitude
        return WaveFunction([pair], offset=cell)

    @staticmethod
    def zero(n_cells: int = 1, offset: int = 0) -> "WaveFunction":
        return WaveFunction(np.zeros((n_cells, 2), dtype=complex), offset=offset)

    # -- basic queries ----------------------------------------------------
    def __len__(self):
        return self.cells.shape[0]

    @property
    def support(self):
        """(first, last) stored cell indices."""
        return self.offset, self.offset + len(self) - 1

    def amplitude(self, n: int) -> np.ndarray:
        j = n - self.offset
        if 0 <= j < len(self):
            return self.cells[j].copy()
        return np.zeros(2, dtype=complex)

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Amplitudes of cells lo..hi inclusive as an (hi-lo+1, 2) array."""
        out = np.zeros((hi - lo + 1, 2), dtype=complex)
        a = max(lo, self.offset)
        b = min(hi, self.offset + len(self) - 1)
        if a <= b:
            out[a - lo:b - lo + 1] = self.cells[a - self.offset:b - self.offset + 1]
        return out

    def norm(self) -> float:
        return float(np.linalg.norm(self.cells))

    def inner(self, other: "WaveFunction") -> complex:
        """<self, other> with the physics convention (conjugate-linear in self)."""
        lo = min(self.offset, other.offset)
        hi = max(self.offset + len(self), other.offset + len(other)) - 1
        return complex(np.vdot(self.window(lo, hi), other.window(lo, hi)))

    def weighted_l1_norm(self, sigma: int = 0) -> float:
        n = np.arange(self.offset, self.offset + len(self))
        w = (1.0 + np.abs(n)) ** sigma
        return float(np.sum(w * np.linalg.norm(self.cells, axis=1)))

    # -- algebra ----------------------------------------------------------
    def __add__(self, other: "WaveFunction") -> "WaveFunction":
        lo = min(self.offset, other.offset)
        hi = max(self.offset + len(self), other.offset + len(other)) - 1
        return WaveFunction(self.window(lo, hi) + other.window(lo, hi), offset=lo)

    def __sub__(self, other: "WaveFunction") -> "WaveFunction":
        return self + (other * (-1.0))

    def __mul__(self, scalar: complex) -> "WaveFunction":
        return WaveFunction(self.cells * scalar, offset=self.offset)

    __rmul__ = __mul__

    def conj(self) -> "WaveFunction":
        return WaveFunction(np.conj(self.cells), offset=self.offset)

    def shifted(self) -> "WaveFunction":
        """Right shift S: (Sf)_n = f_{n-1}."""
        return WaveFunction(self.cells.copy(), offset=self.offset + 1)

    def normalized(self) -> "WaveFunction":
        nrm = self.norm()
        if nrm == 0:
            raise DomainError("cannot normalize the zero state")
        return self * (1.0 / nrm)

    def trimmed(self, tol: float = 0.0) -> "WaveFunction":
        mag = np.linalg.norm(self.cells, axis=1)
        idx = np.nonzero(mag > tol)[0]
        if len(idx) == 0:
            return WaveFunction.zero(1, offset=self.offset)
        return WaveFunction(self.cells[idx[0]:idx[-1] + 1],
                            offset=self.offset + int(idx[0]))


class FourierSeries:
    """Transform q -> sum_n psi_n e^{-inq} of a finitely supported state.

    Callable on real or complex arrays of q (any shape), returning amplitudes
    of shape q.shape + (2,). For states supported on n >= 0 the transform
    extends analytically to Im q <= 0.
    """

    def __init__(self, psi: WaveFunction):
        trimmed = psi.trimmed()
        self._coeffs = trimmed.cells
        self._offset = trimmed.offset

    def __call__(self, q) -> np.ndarray:
        q = np.asarray(q)
        n = self._offset + np.arange(len(self._coeffs))
        phases = np.exp(-1j * np.multiply.outer(q, n))
        return phases @ self._coeffs

    def component(self, site: int):
        """Scalar transform of one sublattice component."""
        coeffs = self._coeffs[:, site]
        n = self._offset + np.arange(len(coeffs))

        def f(q):
            return np.exp(-1j * np.multiply.outer(np.asarray(q), n)) @ coeffs

        return f

    def derivative(self) -> "FourierSeries":
        n = self._offset + np.arange(len(self._coeffs))
        out = FourierSeries.__new__(FourierSeries)
        out._coeffs = self._coeffs * (-1j * n)[:, None]
        out._offset = self._offset
        return out

    def shifted(self) -> "FourierSeries":
        """Transform of the right-shifted state: multiplication by e^{-iq}."""
        out = FourierSeries.__new__(FourierSeries)
        out._coeffs = self._coeffs
        out._offset = self._offset + 1
        return out


@dataclass(frozen=True)
class SpectrumBands:
    neg_band: tuple
    pos_band: tuple
    edge_eigenvalue: float | None


def _stencil(cells: np.ndarray, p: HoppingParams) -> np.ndarray:
    """Apply the hopping stencil to a zero-padded block of cells."""
    a, b = cells[:, _SITE_A], cells[:, _SITE_B]
    out = np.zeros_like(cells)
    out[:, _SITE_A] = p.gamma1 * b
    out[1:, _SITE_A] += p.gamma2 * b[:-1]
    out[:, _SITE_B] = p.gamma1 * a
    out[:-1, _SITE_B] += np.conj(p.gamma2) * a[1:]
    return out


def apply_edge_hamiltonian(psi: WaveFunction, p: HoppingParams) -> WaveFunction:
    """Half-line Hamiltonian with psi_{-1} = 0."""
    if psi.offset < 0:
        raise DomainError("edge Hamiltonian acts on half-line states (offset >= 0)")
    # pad one cell on each side so the stencil can grow the support; the
    # psi_{-1} = 0 convention is automatic because cell -1 is never stored.
    lo = max(0, psi.offset - 1)
    hi = psi.offset + len(psi)
    padded = psi.window(lo, hi)
    return WaveFunction(_stencil(padded, p), offset=lo).trimmed()


def apply_bulk_hamiltonian(psi: WaveFunction, p: HoppingParams) -> WaveFunction:
    """Two-sided Hamiltonian: same stencil, no boundary."""
    lo = psi.offset - 1
    hi = psi.offset + len(psi)
    padded = psi.window(lo, hi)
    return WaveFunction(_stencil(padded, p), offset=lo).trimmed()


def edge_state(p: HoppingParams, n_cells: int) -> WaveFunction:
    """Zero-energy boundary mode (phi*)_n = [(-gamma1/conj(gamma2))^n, 0],
    truncated to n_cells cells and un-normalized."""
    if not p.is_topological:
        raise NotInTopologicalPhase(
            "edge state is normalizable only for |gamma2| > gamma1")
    ratio = -p.gamma1 / np.conj(p.gamma2)
    cells = np.zeros((n_cells, 2), dtype=complex)
    cells[:, _SITE_A] = ratio ** np.arange(n_cells)
    return WaveFunction(cells)


def chiral_conjugate(psi: WaveFunction) -> WaveFunction:
    """Gamma = diag(1, -1) per cell; Gamma H Gamma = -H."""
    cells = psi.cells.copy()
    cells[:, _SITE_B] *= -1.0
    return WaveFunction(cells, offset=psi.offset)


def project_ac(psi: WaveFunction, p: HoppingParams, n_cells: int = 400) -> WaveFunction:
    """Projection onto the continuous spectral subspace: removes the edge-state
    component in the topological phase, identity otherwise."""
    if not p.is_topological:
        return WaveFunction(psi.cells.copy(), offset=psi.offset)
    phi_hat = edge_state(p, n_cells).normalized()
    return psi - phi_hat * phi_hat.inner(psi)


def spectrum_bands(p: HoppingParams) -> SpectrumBands:
    return SpectrumBands(
        neg_band=(-p.gamma_plus, -p.gamma_minus),
        pos_band=(p.gamma_minus, p.gamma_plus),
        edge_eigenvalue=0.0 if p.is_topological else None,
    )


def winding_number(p: HoppingParams, samples: int = 4096) -> int:
    """Winding of q -> gamma1 + gamma2 e^{-iq} around the origin."""
    q = np.linspace(-np.pi, np.pi, samples, endpoint=True)
    vals = p.gamma1 + p.gamma2 * np.exp(-1j * q)
    dphase = np.diff(np.unwrap(np.angle(vals)))
    return int(round(abs(np.sum(dphase)) / (2 * np.pi)))
