"""Exact dynamics and dispersive decay for the half-line SSH lattice.

Public surface: the model types (`HoppingParams`, `WaveFunction`), the
resolvent and propagator operations, the truncated-lattice reference
evolution, and the decay-trace / envelope-fitting helpers.
"""
from .dispersion import (PhaseGeometry, band_width_functions, k_derivatives,
                         k_of, phase_geometry, q_star_boundary,
                         q_star_complex, q_star_lambda)
from .decay import (DecayTrace, FitResult, constant_dependence_scan,
                    envelope_constant, fit_power_law, log_envelope,
                    mixed_envelope_constant, theoretical_prefactor_airy,
                    theoretical_prefactor_edge, trace_decay)
from .errors import (AlphaOutOfRange, BudgetExceeded, CausalityBudget,
                     ConfigError, DegenerateInterval, DomainError,
                     EndpointSingularity, GaplessModel, InsufficientData,
                     NotInTopologicalPhase, OnBandCut, OnSpectrum,
                     PoleAtEndpoint, SSHDispersiveError, SingularBoundary)
from .model import (FourierSeries, HoppingParams, WaveFunction,
                    apply_bulk_hamiltonian, apply_edge_hamiltonian,
                    chiral_conjugate, edge_state, project_ac, winding_number)
from .oracle import causal_cells, oracle_evolve, truncated_hamiltonian
from .propagator import (EvolutionRequest, TypeIntegralTerm, bulk_propagate,
                         edge_correction, edge_correction_direct, evolve_ac,
                         evolve_negative_band, evolve_positive_band, type_I,
                         type_II, type_III)
from .quadrature import (ContourParts, QuadratureSpec, alpha_substitution_integral,
                         default_alpha, graded_breakpoints, integrate_adaptive,
                         oscillatory_integral, pv_integral,
                         pv_oscillatory_contour)
from .resolvent import (J_closed, J_quadrature, K_closed, boundary_determinant,
                        bulk_resolvent_apply, edge_resolvent_apply,
                        resolvent_apply, resolvent_boundary_jump)
from .verify import CheckResult, run_battery

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
