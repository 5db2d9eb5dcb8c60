"""Exception hierarchy shared across the package."""


class EppError(Exception):
    """Base class for all errors raised by eppdrift."""


class NonPositiveParam(EppError, ValueError):
    pass


class OverdampedParam(EppError, ValueError):
    pass


class InvalidState(EppError, ValueError):
    pass


class StepTooLarge(EppError, ValueError):
    """Time step too coarse for the projection scheme to resolve the band."""


class InsufficientSamples(EppError, ValueError):
    pass


class SolverDiverged(EppError, RuntimeError):
    pass


class DegenerateDenominator(EppError, ArithmeticError):
    pass


class QuadratureNotConverged(EppError, RuntimeError):
    pass


class ConfigInvalid(EppError, ValueError):
    pass


class CycleTimeout(EppError, RuntimeError):
    """A simulated path failed to complete a long cycle within its time budget."""
