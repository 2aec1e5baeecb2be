"""Exception types raised across the package."""


class NLCascadeError(Exception):
    """Base class for all package errors."""


class InvalidSpec(NLCascadeError, ValueError):
    """A parameter set violates its documented constraints."""


class DomainError(NLCascadeError, ValueError):
    """A nonlinearity function was queried outside its domain."""


class ConvergenceError(NLCascadeError, RuntimeError):
    """A series or eigen-solver failed to converge."""


class RealityViolation(NLCascadeError, ArithmeticError):
    """A quantity that must be real carried a significant imaginary part."""


class UnknownPreset(NLCascadeError, KeyError):
    """Requested preset name is not registered."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown preset"
