"""Exception and warning types shared across the package."""


class ParameterError(ValueError):
    """A physical parameter is outside its admissible domain."""


class HermiticityError(ValueError):
    """An operator that must be Hermitian is not, beyond tolerance."""


class DegenerateDressingError(ParameterError):
    """Both drive and detuning vanish; the dressed basis is undefined."""


class UndefinedStarkShiftError(ParameterError):
    """The frequency shift of the dominant peak is undefined at zero
    detuning; both sidepeaks sit at +-Omega_cw/2 instead."""


class InfeasibleShiftError(ParameterError):
    """No real drive strength produces the requested shift at this detuning."""


class StiffnessError(RuntimeError):
    """The adaptive integrator underflowed its step size.

    Carries the time reached when integration stalled.
    """

    def __init__(self, message, t_reached=None):
        super().__init__(message)
        self.t_reached = t_reached


class QuadratureError(RuntimeError):
    """A quadrature failed to reach its target tolerance.

    ``achieved`` holds the best error estimate, ``diagnostic`` any extra
    context (e.g. the truncation point of a half-Fourier integral).
    """

    def __init__(self, message, achieved=None, diagnostic=None):
        super().__init__(message)
        self.achieved = achieved
        self.diagnostic = diagnostic


class SteadyStateError(RuntimeError):
    """Steady-state extraction failed; reports the null-space dimension."""

    def __init__(self, message, null_dimension=None):
        super().__init__(message)
        self.null_dimension = null_dimension


class PulseResolutionError(ValueError):
    """The excitation pulse would be under-resolved by the requested grid."""


class ConfigError(ValueError):
    """A sweep configuration file or CLI override is invalid."""


class RecipeError(ValueError):
    """A plot recipe references an unknown recipe name or column."""


class TruncationWarning(UserWarning):
    """An integral was truncated while its integrand was still above the
    configured floor; carries the edge magnitude in the message."""


class SeparationWarning(UserWarning):
    """Sidepeak quantities requested where the peaks are not well separated
    (splitting below ten linewidths); values may be unreliable."""


class ValidityWarning(UserWarning):
    """Parameters are outside the regime where a model assumption holds."""
