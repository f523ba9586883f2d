"""Exception types shared across the package."""


class MajsimError(Exception):
    """Base class for all majsim errors."""


class ModeMismatchError(MajsimError):
    """Operands live in registers with different mode counts."""


class CapacityError(MajsimError):
    """A requested register exceeds a backend's hard size cap."""

    def __init__(self, message, limiting_module=None):
        super().__init__(message)
        self.limiting_module = limiting_module


class NonCliffordError(MajsimError):
    """A non-Clifford instruction was sent to the stabilizer backend."""


class InvalidMeasurementError(MajsimError):
    """Attempt to measure a non-Hermitian or odd-weight operator."""


class OverconstraintError(MajsimError):
    """A preparation targets Majoranas that are already constrained."""


class CircuitError(MajsimError):
    """Malformed circuit: bad indices, bad classical wiring, or bad angles."""


class ConfigError(MajsimError):
    """Invalid experiment configuration."""
