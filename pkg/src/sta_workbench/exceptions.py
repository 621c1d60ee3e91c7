"""Exception types raised across the workbench."""


class StaError(Exception):
    """Base class for all workbench errors."""


class InvalidFieldError(StaError, ValueError):
    """Field vector is malformed or contains non-finite components."""


class DegenerateSpectrumError(StaError, ValueError):
    """Level splitting below threshold; the two branches cannot be separated."""


class ScheduleRangeError(StaError, ValueError):
    """Time argument outside the schedule domain."""


class ProtocolError(StaError, ValueError):
    """Schedule violates a precondition of the measurement protocol."""


class PropagatorConfigError(StaError, ValueError):
    """Propagator settings incompatible with the requested run."""


class FitFailureError(StaError, RuntimeError):
    """Oscillation fit could not lock onto a spectral peak."""


class ConfigError(StaError, ValueError):
    """Bad run configuration: file syntax, unknown key, or invalid value."""
