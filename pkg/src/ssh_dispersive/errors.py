"""Exception hierarchy for ssh_dispersive."""


class SSHDispersiveError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SSHDispersiveError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class NotInTopologicalPhase(SSHDispersiveError):
    """Edge state requested but |gamma2| <= gamma1 (state not normalizable)."""


class GaplessModel(SSHDispersiveError):
    """Operation requires a spectral gap (gamma1 != |gamma2|)."""


class OnSpectrum(SSHDispersiveError):
    """Spectral parameter lies on the essential spectrum."""


class OnBandCut(SSHDispersiveError):
    """omega lies on the band cut [gamma_-^2, gamma_+^2]; use the side-tagged variant."""


class SingularBoundary(SSHDispersiveError):
    """Edge resolvent at z = 0 in the topological phase (det(I+VU) = 0)."""


class EndpointSingularity(SSHDispersiveError):
    """lambda too close to a band edge for the boundary-value machinery."""


class BudgetExceeded(SSHDispersiveError):
    """Quadrature panel budget exhausted before reaching tolerance."""


class CausalityBudget(SSHDispersiveError):
    """Truncated lattice too small for the requested cells/times."""


class PoleAtEndpoint(SSHDispersiveError):
    """Principal-value pole at (or too close to) an integration endpoint."""


class DegenerateInterval(SSHDispersiveError):
    """Contour evaluator called with a vanishing half-interval."""


class AlphaOutOfRange(SSHDispersiveError):
    """alpha outside (2, 3]."""


class InsufficientData(SSHDispersiveError):
    """Not enough grid points for a fit."""


class ConfigError(SSHDispersiveError):
    """Invalid run configuration."""
